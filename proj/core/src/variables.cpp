#include "netspread/variables.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>

#include "netspread/csv.hpp"
#include "netspread/errors.hpp"

namespace netspread {

namespace {

constexpr std::array kSymbols = {
    SymbolInfo{"DFW", VariableGroup::Epidemics},
    SymbolInfo{"DEG", VariableGroup::Network},
    SymbolInfo{"IN.DEG", VariableGroup::Network},
    SymbolInfo{"OUT.DEG", VariableGroup::Network},
    SymbolInfo{"STR", VariableGroup::Network},
    SymbolInfo{"IN.STR", VariableGroup::Network},
    SymbolInfo{"OUT.STR", VariableGroup::Network},
    SymbolInfo{"C", VariableGroup::Network},
    SymbolInfo{"CB", VariableGroup::Network},
    SymbolInfo{"CC", VariableGroup::Network},
    SymbolInfo{"ECC", VariableGroup::Network},
    SymbolInfo{"ECCFC", VariableGroup::Network},
    SymbolInfo{"ECCFC.ABS", VariableGroup::Network},
    SymbolInfo{"CB.PAIR", VariableGroup::Network},
    SymbolInfo{"GI", VariableGroup::Economic},
    SymbolInfo{"GDP", VariableGroup::Economic},
    SymbolInfo{"TFP", VariableGroup::Economic},
    SymbolInfo{"POP", VariableGroup::Economic},
    SymbolInfo{"HC", VariableGroup::Economic},
    SymbolInfo{"GDP.pc", VariableGroup::Economic},
    SymbolInfo{"TFP.pc", VariableGroup::Economic},
    SymbolInfo{"CST", VariableGroup::Spatial, true},
    SymbolInfo{"DSTFC", VariableGroup::Spatial},
    SymbolInfo{"RDL", VariableGroup::Spatial},
    SymbolInfo{"RLL", VariableGroup::Spatial},
    SymbolInfo{"PRT", VariableGroup::Spatial},
    SymbolInfo{"APRT", VariableGroup::Spatial},
};

const SymbolInfo* lookup(std::string_view symbol) {
  for (const auto& s : kSymbols) {
    if (s.symbol == symbol) return &s;
  }
  return nullptr;
}

std::string upper(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

std::string_view to_string(VariableGroup group) {
  switch (group) {
    case VariableGroup::Epidemics: return "epidemics";
    case VariableGroup::Network: return "1D";
    case VariableGroup::Economic: return "2D";
    case VariableGroup::Spatial: return "3D";
    case VariableGroup::Extra: return "extra";
  }
  return "?";
}

std::span<const SymbolInfo> known_symbols() { return kSymbols; }

VariableGroup group_of(std::string_view symbol) {
  const auto* info = lookup(symbol);
  return info ? info->group : VariableGroup::Extra;
}

std::pair<std::size_t, std::string> canonical_order_key(std::string_view symbol) {
  for (std::size_t i = 0; i < kSymbols.size(); ++i) {
    if (kSymbols[i].symbol == symbol) return {i, {}};
  }
  return {kSymbols.size(), std::string(symbol)};
}

bool VariablesTable::has_column(std::string_view name) const { return columns_.find(name) != columns_.end(); }

std::span<const Cell> VariablesTable::column(std::string_view name) const {
  const auto it = columns_.find(name);
  if (it == columns_.end()) throw AnalysisError("variables table has no column '" + std::string(name) + "'");
  return it->second;
}

void VariablesTable::set_column(const std::string& name, std::vector<Cell> values) {
  if (values.size() != rows_) {
    throw AnalysisError("column '" + name + "' has " + std::to_string(values.size()) + " values for " +
                        std::to_string(rows_) + " rows");
  }
  if (const auto* info = lookup(name); info && info->binary) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] && *values[i] != 0.0 && *values[i] != 1.0) {
        throw IngestError("column '" + name + "' is binary but row " + std::to_string(i) + " holds " +
                          csv::format_number(*values[i]));
      }
    }
  }
  if (columns_.find(name) == columns_.end()) names_.push_back(name);
  columns_[name] = std::move(values);
}

VariablesTable parse_variables(std::string_view text, const FlowNetwork& net, std::string_view source) {
  const auto table = csv::parse(text, source);
  const std::string src(source);

  const auto c_code = table.column("code");
  if (!c_code) throw IngestError(src + ": header lacks required column 'code'");
  if (!table.column(kDfw)) throw IngestError(src + ": header lacks required column 'DFW'");

  std::set<std::string, std::less<>> seen_names;
  std::vector<std::size_t> data_columns;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c == *c_code) continue;
    const auto& name = table.header[c];
    if (name.empty()) throw IngestError(src + ": empty column name at position " + std::to_string(c + 1));
    if (!seen_names.insert(name).second) throw IngestError(src + ": duplicate column '" + name + "'");
    if (!lookup(name)) {
      for (const auto& s : kSymbols) {
        if (upper(s.symbol) == upper(name)) {
          throw IngestError(src + ": column '" + name + "' differs from known symbol '" + std::string(s.symbol) +
                            "' only by case");
        }
      }
    }
    data_columns.push_back(c);
  }

  const std::size_t n = net.node_count();
  std::vector<std::vector<Cell>> values(data_columns.size(), std::vector<Cell>(n));
  std::vector<bool> present(n, false);

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string at = src + ":" + std::to_string(table.line_numbers[r]) + ": ";
    const auto id = net.find(row[*c_code]);
    if (!id) throw IngestError(at + "country code '" + row[*c_code] + "' is not in the network");
    if (present[*id]) throw IngestError(at + "duplicate row for '" + row[*c_code] + "'");
    present[*id] = true;

    for (std::size_t k = 0; k < data_columns.size(); ++k) {
      const auto& name = table.header[data_columns[k]];
      const auto& cell = row[data_columns[k]];
      if (cell.empty()) continue;
      const auto v = csv::parse_number(cell);
      if (!v) throw IngestError(at + "column '" + name + "' is not numeric: '" + cell + "'");
      if (name == kDfw && (*v < 0.0 || std::floor(*v) != *v)) {
        throw IngestError(at + "DFW must be a non-negative integer, got '" + cell + "'");
      }
      const auto* info = lookup(name);
      if (info && info->binary && *v != 0.0 && *v != 1.0) {
        throw IngestError(at + "column '" + name + "' is binary (0/1), got '" + cell + "'");
      }
      values[k][*id] = *v;
    }
  }

  VariablesTable out(n);
  for (std::size_t k = 0; k < data_columns.size(); ++k) {
    out.set_column(table.header[data_columns[k]], std::move(values[k]));
  }
  std::vector<NodeId> missing;
  for (NodeId i = 0; i < n; ++i) {
    if (!present[i]) missing.push_back(i);
  }
  out.set_missing_rows(std::move(missing));
  return out;
}

std::string write_variables_csv(const VariablesTable& table, const FlowNetwork& net) {
  std::vector<std::string> header{"code"};
  for (const auto& name : table.column_names()) header.push_back(name);
  std::string out = csv::join_row(header);
  for (NodeId i = 0; i < table.row_count(); ++i) {
    std::vector<std::string> row{net.node(i).code};
    for (const auto& name : table.column_names()) {
      const auto& cell = table.column(name)[i];
      row.push_back(cell ? csv::format_number(*cell) : std::string{});
    }
    out += csv::join_row(row);
  }
  return out;
}

}  // namespace netspread
