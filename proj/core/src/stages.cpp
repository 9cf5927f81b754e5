#include "netspread/stages.hpp"

namespace netspread {

std::string_view to_string(Stage stage) { return stage == Stage::First ? "First" : "Second"; }

StageAssignment assign_stages(const VariablesTable& table, double cut) {
  const auto dfw = table.column(kDfw);
  StageAssignment out;
  out.cut_used = cut;
  out.stage.resize(dfw.size());
  for (NodeId i = 0; i < dfw.size(); ++i) {
    if (!dfw[i]) {
      out.missing.push_back(i);
      continue;
    }
    const Stage s = *dfw[i] <= cut ? Stage::First : Stage::Second;
    out.stage[i] = s;
    ++(s == Stage::First ? out.first_count : out.second_count);
  }
  return out;
}

}  // namespace netspread
