#include "netspread/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "netspread/csv.hpp"
#include "netspread/digest.hpp"
#include "netspread/emit.hpp"
#include "netspread/errors.hpp"
#include "netspread/stats.hpp"

namespace netspread {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kNormalityNote =
    "least-squares residuals are assumed e ~ N(0, sigma_e^2); the assumption is recorded, not tested";

struct Pairs {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<NodeId> ids;
};

Pairs present_pairs(const VariablesTable& table, std::string_view xcol, std::string_view ycol) {
  const auto xs = table.column(xcol);
  const auto ys = table.column(ycol);
  Pairs p;
  for (NodeId i = 0; i < xs.size(); ++i) {
    if (xs[i] && ys[i]) {
      p.x.push_back(*xs[i]);
      p.y.push_back(*ys[i]);
      p.ids.push_back(i);
    }
  }
  return p;
}

std::vector<double> present(std::span<const Cell> cells) {
  std::vector<double> out;
  for (const auto& c : cells) {
    if (c) out.push_back(*c);
  }
  return out;
}

ojson box_json(const BoxStats& b) {
  return {{"n", b.n},           {"median", b.median},         {"q1", b.q1},
          {"q3", b.q3},         {"iqr", b.iqr},               {"whisker_lo", b.whisker_lo},
          {"whisker_hi", b.whisker_hi}, {"outliers", b.outliers}};
}

ojson fit_json(const FitResult& r) {
  ojson coef;
  const auto names = coefficient_names(r.family);
  for (std::size_t i = 0; i < names.size(); ++i) coef[std::string(names[i])] = r.coefficients[i];
  return {{"family", std::string(to_string(r.family))},
          {"coefficients", coef},
          {"n", r.n},
          {"sse", r.sse},
          {"r2", r.r2},
          {"adj_r2", r.adj_r2},
          {"converged", r.converged},
          {"iterations", r.iterations}};
}

ojson ranked_json(const RankedFits& fits) {
  ojson ranked = ojson::array();
  for (const auto& r : fits.ranked) ranked.push_back(fit_json(r));
  ojson skipped = ojson::array();
  for (const auto& s : fits.skipped) skipped.push_back({{"family", std::string(to_string(s.family))}, {"reason", s.reason}});
  return {{"ranked", ranked}, {"skipped", skipped}};
}

// Groups of `values` keyed by `keys` (both present), in ascending key order.
std::map<double, std::vector<double>> bucket(std::span<const Cell> keys, std::span<const Cell> values) {
  std::map<double, std::vector<double>> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] && values[i]) out[*keys[i]].push_back(*values[i]);
  }
  return out;
}

template <class F>
auto run_stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, exit_code_for(e), e.what());
  }
}

class Staging {
 public:
  explicit Staging(fs::path out) : out_(std::move(out)), dir_(out_ / ".netspread-staging") {}

  void open() {
    created_out_ = !fs::exists(out_);
    fs::create_directories(out_);
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw EmissionError("cannot create '" + (dir_ / name).string() + "'");
    f << content;
    if (!f) throw EmissionError("failed writing '" + (dir_ / name).string() + "'");
    names_.push_back(name);
    contents_.push_back(content);
  }

  std::vector<EmittedFile> manifest() const {
    std::vector<EmittedFile> out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      out.push_back({names_[i], sha256_hex(contents_[i]), contents_[i].size()});
    }
    return out;
  }

  void commit() {
    for (const auto& name : names_) fs::rename(dir_ / name, out_ / name);
    fs::remove_all(dir_);
    committed_ = true;
  }

  ~Staging() {
    if (committed_) return;
    std::error_code ec;
    fs::remove_all(dir_, ec);
    if (created_out_ && fs::is_empty(out_, ec)) fs::remove(out_, ec);
  }

 private:
  fs::path out_;
  fs::path dir_;
  bool created_out_ = false;
  bool committed_ = false;
  std::vector<std::string> names_;
  std::vector<std::string> contents_;
};

}  // namespace

int exit_code_for(const std::exception& e) {
  if (const auto* p = dynamic_cast<const PipelineError*>(&e)) return p->exit_code();
  if (dynamic_cast<const IngestError*>(&e)) return kExitIngest;
  if (dynamic_cast<const EmissionError*>(&e)) return kExitEmission;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitEmission;
  return kExitAnalysis;
}

void RunConfig::validate() const {
  if (nodes_path.empty()) throw AnalysisError("config: nodes path is required");
  if (edges_path.empty()) throw AnalysisError("config: edges path is required");
  if (variables_path.empty()) throw AnalysisError("config: variables path is required");
  if (output_dir.empty()) throw AnalysisError("config: output directory is required");
  if (bandwidth && !(*bandwidth > 0.0)) throw AnalysisError("config: bandwidth must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw AnalysisError("config: alpha must lie in (0, 1)");
  if (!(mass_window_lo < mass_window_hi)) throw AnalysisError("config: mass window needs lo < hi");
}

std::string config_to_json(const RunConfig& c) {
  ojson j;
  j["nodes"] = c.nodes_path;
  j["edges"] = c.edges_path;
  j["variables"] = c.variables_path;
  j["out"] = c.output_dir.string();
  j["reference"] = c.reference;
  j["directed"] = c.directed_paths;
  j["bandwidth"] = c.bandwidth ? ojson(*c.bandwidth) : ojson("silverman");
  j["cut_at"] = c.cut_at ? ojson(*c.cut_at) : ojson("detect");
  j["t_cut"] = c.quadrant_t_cut;
  j["k_cut"] = c.quadrant_k_cut;
  j["mass_window"] = {c.mass_window_lo, c.mass_window_hi};
  j["x"] = c.x_column;
  j["y"] = c.y_column;
  j["raw_fit"] = c.raw_fit;
  j["alpha"] = c.alpha;
  j["pooled"] = c.variance == VarianceModel::Pooled;
  j["split_then_standardize"] = c.split_then_standardize;
  j["emit"] = {{"metrics", c.emit.metrics}, {"kde", c.emit.kde},         {"stages", c.emit.stages},
               {"fits", c.emit.fits},       {"battery", c.emit.battery}, {"charts", c.emit.charts},
               {"map", c.emit.map}};
  return j.dump();
}

std::string RunReport::to_json() const {
  ojson j;
  j["nodes"] = node_count;
  j["edges"] = edge_count;
  if (detected_cut) {
    j["detected_cut"] = {{"cut", detected_cut->cut},
                         {"resolution", detected_cut->resolution},
                         {"left_mode", detected_cut->left_peak},
                         {"right_mode", detected_cut->right_peak}};
  } else {
    j["detected_cut"] = nullptr;
  }
  if (!detection_note.empty()) j["detection_note"] = detection_note;
  j["cut_used"] = cut_used;
  j["stage_counts"] = {{"first", first_stage}, {"second", second_stage}, {"missing_dfw", missing_dfw}};
  j["mass_in_window"] = mass_in_window ? ojson(*mass_in_window) : ojson(nullptr);
  ojson files_json = ojson::array();
  for (const auto& f : files) files_json.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["files"] = files_json;
  j["config"] = ojson::parse(config_json.empty() ? "{}" : config_json);
  return j.dump(2) + "\n";
}

std::string write_density_csv(const DensityCurve& curve) {
  std::string out = csv::join_row({"grid_x", "density"});
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out += csv::join_row({csv::format_number(curve.grid[i]), csv::format_number(curve.density[i])});
  }
  return out;
}

std::string stage_cut_json(const StageCut& cut, const DensityCurve& curve) {
  const ojson j = {{"cut", cut.cut},
                   {"resolution", cut.resolution},
                   {"left_mode", cut.left_peak},
                   {"right_mode", cut.right_peak},
                   {"bandwidth", curve.bandwidth},
                   {"n", curve.n}};
  return j.dump() + "\n";
}

std::string write_stages_csv(const FlowNetwork& net, const VariablesTable& table, const StageAssignment& stages,
                             std::span<const Cell> degree, double t_cut, double k_cut) {
  const auto dfw = table.column(kDfw);
  std::vector<std::string> header{"code", "name", "continent", "DFW", "stage"};
  if (!degree.empty()) header.push_back("quadrant");
  std::string out = csv::join_row(header);
  for (const auto& node : net.nodes()) {
    const auto& d = dfw[node.id];
    const auto& s = stages.stage[node.id];
    std::vector<std::string> row{node.code, node.name, std::string(to_string(node.continent)),
                                 d ? csv::format_number(*d) : "", s ? std::string(to_string(*s)) : ""};
    if (!degree.empty()) {
      const auto& k = degree[node.id];
      row.push_back(d && k ? std::string(to_string(quadrant_classify(*d, *k, t_cut, k_cut).label)) : "");
    }
    out += csv::join_row(row);
  }
  return out;
}

std::string fits_json(const RankedFits& fits, std::string_view x_name, std::string_view y_name, bool group_means) {
  ojson j = {{"x", std::string(x_name)},
             {"y", std::string(y_name)},
             {"data", group_means ? "per-x group means" : "raw points"},
             {"assumptions", kNormalityNote}};
  const auto body = ranked_json(fits);
  j["ranked"] = body["ranked"];
  j["skipped"] = body["skipped"];
  return j.dump(2) + "\n";
}

std::string battery_meta_json(std::span<const BatteryEntry> battery, double cut, const BatteryOptions& options) {
  ojson notes = ojson::array();
  for (const auto& e : battery) {
    ojson entry = {{"variable", e.variable}, {"dropped_missing", e.dropped_missing}};
    if (!e.note.empty()) entry["note"] = e.note;
    if (e.result) {
      entry["mean_a"] = e.result->mean_a;
      entry["mean_b"] = e.result->mean_b;
      entry["t"] = e.result->t_stat;
      entry["df"] = std::isfinite(e.result->df) ? ojson(e.result->df) : ojson(nullptr);
    }
    notes.push_back(entry);
  }
  const ojson j = {{"cut", cut},
                   {"group_a", "DFW <= cut (first stage)"},
                   {"group_b", "DFW > cut (second stage)"},
                   {"interval", std::string(to_string(options.variance))},
                   {"confidence", 1.0 - options.alpha},
                   {"standardization", options.split_then_standardize ? "min-max within each stage group"
                                                                       : "min-max over the pooled column, then split"},
                   {"quantile_rule", std::string(stats::kQuantileRule)},
                   {"multiple_comparison_correction", "none"},
                   {"columns", notes}};
  return j.dump(2) + "\n";
}

RunReport run_pipeline(const RunConfig& config) {
  run_stage("config", [&] {
    config.validate();
    return 0;
  });

  Staging staging(config.output_dir);
  run_stage("output", [&] {
    staging.open();
    return 0;
  });

  RunReport report;
  report.config_json = config_to_json(config);

  auto [net, table] = run_stage("ingest", [&] {
    auto n = load_network(config.nodes_path, config.edges_path);
    auto t = parse_variables(csv::read_file(config.variables_path), n, config.variables_path);
    return std::make_pair(std::move(n), std::move(t));
  });
  report.node_count = net.node_count();
  report.edge_count = net.edge_count();

  run_stage("metrics", [&] {
    MetricsOptions opts;
    opts.directed_paths = config.directed_paths;
    opts.reference = config.reference;
    const auto metrics = compute_all_metrics(net, opts);
    append_metrics(table, metrics);
    if (config.emit.metrics) {
      staging.write("metrics.csv", write_variables_csv(table, net));
      ojson meta = {{"reference", config.reference},
                    {"path_view", config.directed_paths ? "directed" : "undirected"},
                    {"notes", metrics.notes}};
      staging.write("metrics.meta.json", meta.dump(2) + "\n");
    }
    return 0;
  });

  const auto dfw_values = present(table.column(kDfw));
  std::optional<DensityCurve> curve;
  const bool needs_cut = config.emit.stages || config.emit.battery || config.emit.charts || config.emit.map;
  if (config.emit.kde || (needs_cut && !config.cut_at)) {
    run_stage("kde", [&] {
      curve = kde_estimate(dfw_values, config.bandwidth);
      if (config.emit.kde) staging.write("density.csv", write_density_csv(*curve));
      report.mass_in_window = mass_between(*curve, config.mass_window_lo, config.mass_window_hi);
      try {
        report.detected_cut = find_stage_cut(*curve);
        if (config.emit.kde) staging.write("stage_cut.json", stage_cut_json(*report.detected_cut, *curve));
      } catch (const AnalysisError& e) {
        if (!config.cut_at) throw;
        report.detection_note = e.what();
      }
      return 0;
    });
  }
  report.cut_used = config.cut_at ? *config.cut_at : report.detected_cut ? report.detected_cut->cut : 0.0;

  StageAssignment stages;
  if (needs_cut) {
    stages = run_stage("stages", [&] {
      auto s = assign_stages(table, report.cut_used);
      if (config.emit.stages) {
        const auto deg = table.has_column(config.y_column) ? table.column(config.y_column) : std::span<const Cell>{};
        staging.write("stages.csv",
                      write_stages_csv(net, table, s, deg, config.quadrant_t_cut, config.quadrant_k_cut));
      }
      return s;
    });
    report.first_stage = stages.first_count;
    report.second_stage = stages.second_count;
    report.missing_dfw = stages.missing.size();
  }

  std::optional<FitResult> trend;
  std::optional<GroupMeans> means;
  std::optional<RankedFits> eccfc_fits;
  std::map<double, std::vector<double>> eccfc_groups;
  if (config.emit.fits || config.emit.charts) {
    run_stage("fits", [&] {
      const auto pairs = present_pairs(table, config.x_column, config.y_column);
      std::vector<double> fx = pairs.x;
      std::vector<double> fy = pairs.y;
      if (!config.raw_fit) {
        means = group_mean(pairs.x, pairs.y);
        fx = means->keys;
        fy = means->means;
      }
      const auto ranked = best_fit(fx, fy, all_families());
      for (const auto& r : ranked.ranked) {
        if (r.family == CurveFamily::Exp1 && r.converged) trend = r;
      }
      if (!trend && ranked.ranked.front().converged) trend = ranked.ranked.front();

      ojson doc;
      doc["trend"] = ojson::parse(fits_json(ranked, config.x_column, config.y_column, !config.raw_fit));

      if (table.has_column("ECCFC")) {
        eccfc_groups = bucket(table.column("ECCFC"), table.column(kDfw));
        std::vector<double> cls;
        std::vector<double> med;
        for (const auto& [k, v] : eccfc_groups) {
          cls.push_back(k);
          med.push_back(box_stats(v).median);
        }
        ojson e = {{"x", "ECCFC"}, {"y", "median DFW per ECCFC class"}, {"classes", cls}, {"medians", med},
                   {"assumptions", kNormalityNote}};
        try {
          eccfc_fits = best_fit(cls, med, all_families());
          const auto body = ranked_json(*eccfc_fits);
          e["ranked"] = body["ranked"];
          e["skipped"] = body["skipped"];
        } catch (const AnalysisError& err) {
          e["error"] = err.what();
        }
        doc["eccfc_medians"] = e;
      }
      if (config.emit.fits) {
        staging.write("fits.json", doc.dump(2) + "\n");

        ojson boxes = {{"quantile_rule", std::string(stats::kQuantileRule)},
                       {"whiskers", "Tukey, most extreme datum within 1.5 IQR of the quartiles"}};
        boxes[std::string(kDfw)] = box_json(box_stats(dfw_values));
        if (table.has_column(config.y_column)) {
          boxes[config.y_column] = box_json(box_stats(present(table.column(config.y_column))));
        }
        ojson by_cont;
        const auto dfw = table.column(kDfw);
        for (int c = 0; c <= static_cast<int>(Continent::Oceania); ++c) {
          std::vector<double> v;
          for (const auto& node : net.nodes()) {
            if (static_cast<int>(node.continent) == c && dfw[node.id]) v.push_back(*dfw[node.id]);
          }
          if (!v.empty()) by_cont[std::string(to_string(static_cast<Continent>(c)))] = box_json(box_stats(v));
        }
        boxes["DFW_by_continent"] = by_cont;
        ojson by_ecc = ojson::array();
        for (const auto& [k, v] : eccfc_groups) {
          auto b = box_json(box_stats(v));
          b["ECCFC"] = k;
          by_ecc.push_back(b);
        }
        boxes["DFW_by_ECCFC"] = by_ecc;
        staging.write("boxstats.json", boxes.dump(2) + "\n");
      }
      return 0;
    });
  }

  std::vector<BatteryEntry> battery;
  if (config.emit.battery || config.emit.charts) {
    run_stage("battery", [&] {
      BatteryOptions opts;
      opts.alpha = config.alpha;
      opts.variance = config.variance;
      opts.split_then_standardize = config.split_then_standardize;
      battery = stage_ttest_battery(table, report.cut_used, opts);
      if (config.emit.battery) {
        staging.write("battery.csv", write_battery_csv(battery));
        staging.write("battery.meta.json", battery_meta_json(battery, report.cut_used, opts));
      }
      return 0;
    });
  }

  if (config.emit.charts) {
    run_stage("charts", [&] {
      const auto pairs = present_pairs(table, config.x_column, config.y_column);
      ScatterLayers layers;
      layers.title = config.x_column + " vs " + config.y_column;
      layers.x_label = config.x_column;
      layers.y_label = config.y_column;
      const auto xcol = table.column(config.x_column);
      for (int c = 0; c <= static_cast<int>(Continent::Oceania); ++c) {
        std::vector<double> v;
        for (const auto& node : net.nodes()) {
          if (static_cast<int>(node.continent) == c && xcol[node.id]) v.push_back(*xcol[node.id]);
        }
        if (!v.empty()) layers.x_boxes.push_back({std::string(to_string(static_cast<Continent>(c))), box_stats(v)});
      }
      if (!pairs.y.empty()) layers.y_box = box_stats(pairs.y);
      if (means) {
        for (std::size_t i = 0; i < means->keys.size(); ++i) layers.group_means.emplace_back(means->keys[i], means->means[i]);
      }
      layers.curve = trend;
      layers.x_cut = config.quadrant_t_cut;
      layers.y_cut = config.quadrant_k_cut;
      staging.write("scatter.svg", emit_scatter_with_layers(pairs.x, pairs.y, layers));

      std::vector<MeanDiffResult> tested;
      for (const auto& e : battery) {
        if (e.result) tested.push_back(*e.result);
      }
      if (!tested.empty()) staging.write("errorbars.svg", emit_errorbar_chart(tested));

      if (!eccfc_groups.empty()) {
        std::vector<GroupBox> groups;
        std::vector<double> positions;
        for (const auto& [k, v] : eccfc_groups) {
          groups.push_back({"ECCFC " + svg::tick_label(k), box_stats(v)});
          positions.push_back(k);
        }
        std::optional<FitResult> best;
        if (eccfc_fits && eccfc_fits->ranked.front().converged) best = eccfc_fits->ranked.front();
        staging.write("eccfc_boxplots.svg", emit_boxplots(groups, positions, "ECCFC", "DFW", best));
      }
      return 0;
    });
  }

  if (config.emit.map) {
    run_stage("map", [&] {
      ChoroplethLayer dfw_layer;
      dfw_layer.title = "Days from the first case (DFW)";
      dfw_layer.value_name = std::string(kDfw);
      const auto dfw = table.column(kDfw);
      dfw_layer.values.assign(dfw.begin(), dfw.end());
      auto files = emit_choropleth(net, dfw_layer);
      staging.write("map_dfw.geojson", files.geojson);
      staging.write("map_dfw.svg", files.svg);

      ChoroplethLayer stage_layer;
      stage_layer.title = "Spread stages (cut " + svg::tick_label(report.cut_used) + ")";
      stage_layer.value_name = "stage";
      stage_layer.palette = Palette::Binary;
      for (const auto& s : stages.stage) {
        stage_layer.values.push_back(s ? std::optional<double>(*s == Stage::First ? 0.0 : 1.0) : std::nullopt);
      }
      files = emit_choropleth(net, stage_layer);
      staging.write("map_stages.geojson", files.geojson);
      staging.write("map_stages.svg", files.svg);

      if (table.has_column("ECCFC")) {
        ChoroplethLayer ecc_layer;
        ecc_layer.title = "Eccentricity relative to " + config.reference;
        ecc_layer.value_name = "ECCFC";
        const auto ecc = table.column("ECCFC");
        ecc_layer.values.assign(ecc.begin(), ecc.end());
        files = emit_choropleth(net, ecc_layer);
        staging.write("map_eccfc.geojson", files.geojson);
        staging.write("map_eccfc.svg", files.svg);
      }
      return 0;
    });
  }

  run_stage("report", [&] {
    report.files = staging.manifest();
    staging.write("run_report.json", report.to_json());
    staging.commit();
    return 0;
  });
  return report;
}

}  // namespace netspread
