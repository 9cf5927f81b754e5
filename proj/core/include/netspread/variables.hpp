#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netspread/network.hpp"

namespace netspread {

/// Conceptual grouping of the explanatory variables.
enum class VariableGroup { Epidemics, Network, Economic, Spatial, Extra };

std::string_view to_string(VariableGroup group);

struct SymbolInfo {
  std::string_view symbol;
  VariableGroup group;
  bool binary = false;
};

/// Known column symbols in canonical order: DFW, the network metrics, the
/// economic group, then the spatial group.
std::span<const SymbolInfo> known_symbols();

/// Group of a column; Extra for anything not in known_symbols().
VariableGroup group_of(std::string_view symbol);

/// Sort key placing known symbols in canonical order and extras after them,
/// alphabetically.
std::pair<std::size_t, std::string> canonical_order_key(std::string_view symbol);

inline constexpr std::string_view kDfw = "DFW";

/// A missing value is an empty optional, never zero.
using Cell = std::optional<double>;

/// Per-node numeric columns. Row i belongs to node id i of the companion
/// FlowNetwork, so referential integrity holds by construction.
class VariablesTable {
 public:
  VariablesTable() = default;
  explicit VariablesTable(std::size_t rows) : rows_(rows) {}

  std::size_t row_count() const { return rows_; }
  const std::vector<std::string>& column_names() const { return names_; }
  bool has_column(std::string_view name) const;

  /// Throws AnalysisError if the column does not exist.
  std::span<const Cell> column(std::string_view name) const;

  /// Adds or replaces a column. Throws AnalysisError on a length mismatch,
  /// and IngestError if a binary column holds anything but 0/1.
  void set_column(const std::string& name, std::vector<Cell> values);

  /// Nodes for which the variables file had no row.
  const std::vector<NodeId>& missing_rows() const { return missing_rows_; }
  void set_missing_rows(std::vector<NodeId> ids) { missing_rows_ = std::move(ids); }

 private:
  std::size_t rows_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, std::vector<Cell>, std::less<>> columns_;
  std::vector<NodeId> missing_rows_;
};

/// Parses `variables.csv` (code,DFW,<symbol columns...>). Empty cells are
/// missing values. DFW must be a non-negative integer, CST binary.
VariablesTable parse_variables(std::string_view text, const FlowNetwork& net,
                               std::string_view source = "variables.csv");

/// code column followed by every table column in insertion order.
std::string write_variables_csv(const VariablesTable& table, const FlowNetwork& net);

}  // namespace netspread
