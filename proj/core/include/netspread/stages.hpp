#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "netspread/network.hpp"
#include "netspread/variables.hpp"

namespace netspread {

enum class Stage { First, Second };

std::string_view to_string(Stage stage);

/// Per-node stage: First when DFW <= cut_used, Second otherwise. Nodes
/// without DFW have no stage and are listed in `missing`.
struct StageAssignment {
  std::vector<std::optional<Stage>> stage;
  double cut_used = 0.0;
  std::size_t first_count = 0;
  std::size_t second_count = 0;
  std::vector<NodeId> missing;
};

/// Throws AnalysisError if the table has no DFW column.
StageAssignment assign_stages(const VariablesTable& table, double cut);

}  // namespace netspread
