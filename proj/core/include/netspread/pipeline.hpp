#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netspread/centrality.hpp"
#include "netspread/curvefit.hpp"
#include "netspread/inference.hpp"
#include "netspread/kde.hpp"
#include "netspread/network.hpp"
#include "netspread/stages.hpp"
#include "netspread/variables.hpp"

namespace netspread {

/// Process exit codes by failing stage kind.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIngest = 2, kExitAnalysis = 3, kExitEmission = 4 };

/// Exit code for an exception thrown by the library.
int exit_code_for(const std::exception& e);

struct EmitToggles {
  bool metrics = true;
  bool kde = true;
  bool stages = true;
  bool fits = true;
  bool battery = true;
  bool charts = true;
  bool map = true;
};

struct RunConfig {
  std::string nodes_path;
  std::string edges_path;
  std::string variables_path;
  std::filesystem::path output_dir;

  std::string reference = "CHN";
  bool directed_paths = false;

  std::optional<double> bandwidth;     // Silverman when empty
  std::optional<double> cut_at;        // overrides the detected stage cut
  double quadrant_t_cut = kDefaultTimeCut;
  double quadrant_k_cut = kDefaultDegreeCut;
  double mass_window_lo = 20.0;
  double mass_window_hi = 70.0;

  std::string x_column = "DFW";
  std::string y_column = "DEG";
  bool raw_fit = false;                // fit raw points instead of per-x means

  double alpha = 0.05;
  VarianceModel variance = VarianceModel::Welch;
  bool split_then_standardize = false;

  EmitToggles emit;

  /// Throws AnalysisError naming the first unmet prerequisite.
  void validate() const;
};

struct EmittedFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::optional<StageCut> detected_cut;
  std::string detection_note;
  double cut_used = 0.0;
  std::size_t first_stage = 0;
  std::size_t second_stage = 0;
  std::size_t missing_dfw = 0;
  std::optional<double> mass_in_window;
  std::vector<EmittedFile> files;  // every artifact except the report itself
  std::string config_json;         // effective configuration, defaults included

  std::string to_json() const;
};

/// Failure of one pipeline stage; wraps the underlying library error.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, int exit_code, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), exit_code_(exit_code) {}
  const std::string& stage() const { return stage_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

/// Runs ingest -> metrics -> kde/cut -> stages -> fits -> battery -> charts
/// -> map, writing into `config.output_dir`. Artifacts are staged in a
/// temporary directory and moved into place only when every stage succeeds,
/// so a failed run leaves no partial outputs. Throws PipelineError.
RunReport run_pipeline(const RunConfig& config);

/// Config echo used by the report.
std::string config_to_json(const RunConfig& config);

// Artifact writers shared with the CLI subcommands.

/// grid_x,density
std::string write_density_csv(const DensityCurve& curve);
/// One-line JSON describing a stage cut.
std::string stage_cut_json(const StageCut& cut, const DensityCurve& curve);
/// code,name,continent,DFW,stage[,quadrant]; quadrant needs `degree`.
std::string write_stages_csv(const FlowNetwork& net, const VariablesTable& table, const StageAssignment& stages,
                             std::span<const Cell> degree, double t_cut, double k_cut);
/// JSON for a ranked family comparison (families, coefficients, sse, r2,
/// adj_r2, skip list).
std::string fits_json(const RankedFits& fits, std::string_view x_name, std::string_view y_name, bool group_means);
/// Battery metadata (variance model, quantile rule, standardization order).
std::string battery_meta_json(std::span<const BatteryEntry> battery, double cut, const BatteryOptions& options);

}  // namespace netspread
