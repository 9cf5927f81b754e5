#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "netspread/csv.hpp"
#include "netspread/digest.hpp"
#include "netspread/emit.hpp"
#include "netspread/errors.hpp"
#include "netspread/pipeline.hpp"

namespace netspread::cli {

namespace fs = std::filesystem;

namespace {

std::string default_out() {
  if (const char* env = std::getenv("NETSPREAD_OUT"); env && *env) return env;
  return "netspread-out";
}

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw EmissionError("cannot create '" + path.string() + "'");
  f << content;
  if (!f) throw EmissionError("failed writing '" + path.string() + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Numeric column of an arbitrary CSV; blank cells are skipped.
std::vector<double> numeric_column(const csv::Table& t, const std::string& name, const std::string& source) {
  const auto idx = t.column(name);
  if (!idx) throw IngestError(source + ": no column '" + name + "'");
  std::vector<double> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& cell = t.rows[r][*idx];
    if (trim(cell).empty()) continue;
    const auto v = csv::parse_number(cell);
    if (!v) {
      throw IngestError(source + ":" + std::to_string(t.line_numbers[r]) + ": column '" + name +
                        "' is not numeric: '" + cell + "'");
    }
    out.push_back(*v);
  }
  return out;
}

struct XY {
  std::vector<double> x;
  std::vector<double> y;
};

XY numeric_pairs(const csv::Table& t, const std::string& xn, const std::string& yn, const std::string& source) {
  const auto xi = t.column(xn);
  const auto yi = t.column(yn);
  if (!xi) throw IngestError(source + ": no column '" + xn + "'");
  if (!yi) throw IngestError(source + ": no column '" + yn + "'");
  XY out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& xc = t.rows[r][*xi];
    const auto& yc = t.rows[r][*yi];
    if (trim(xc).empty() || trim(yc).empty()) continue;
    const auto x = csv::parse_number(xc);
    const auto y = csv::parse_number(yc);
    if (!x || !y) throw IngestError(source + ":" + std::to_string(t.line_numbers[r]) + ": non-numeric value");
    out.x.push_back(*x);
    out.y.push_back(*y);
  }
  return out;
}

fs::path sidecar(const fs::path& path, const std::string& suffix) {
  return path.parent_path() / (path.stem().string() + suffix);
}

struct DataTable {
  std::vector<std::string> codes;
  VariablesTable table;
};

// A per-country CSV without its network (e.g. metrics.csv). Columns whose
// cells are not all numeric are ignored unless they carry a known symbol.
DataTable load_data_table(const std::string& path) {
  const auto t = csv::parse(csv::read_file(path), path);
  const auto code_col = t.column("code");
  if (!code_col) throw IngestError(path + ": missing 'code' column");
  if (!t.column(std::string(kDfw))) throw IngestError(path + ": missing 'DFW' column");
  DataTable out;
  out.table = VariablesTable(t.rows.size());
  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& code = t.rows[r][*code_col];
    if (!seen.insert(code).second) {
      throw IngestError(path + ":" + std::to_string(t.line_numbers[r]) + ": duplicate code '" + code + "'");
    }
    out.codes.push_back(code);
  }
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == *code_col) continue;
    const auto& name = t.header[c];
    const bool known = canonical_order_key(name).first < known_symbols().size();
    std::vector<Cell> values;
    bool numeric = true;
    for (std::size_t r = 0; r < t.rows.size() && numeric; ++r) {
      const auto& cell = t.rows[r][c];
      if (trim(cell).empty()) {
        values.emplace_back();
        continue;
      }
      const auto v = csv::parse_number(cell);
      if (!v) {
        if (known) {
          throw IngestError(path + ":" + std::to_string(t.line_numbers[r]) + ": column '" + name +
                            "' is not numeric: '" + cell + "'");
        }
        numeric = false;
      }
      values.push_back(v);
    }
    if (numeric) out.table.set_column(name, std::move(values));
  }
  return out;
}

int verify_report(const fs::path& dir, std::ostream& out, std::ostream& err) {
  const auto path = dir / "run_report.json";
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(csv::read_file(path.string()));
  } catch (const std::exception& e) {
    err << "netspread: verify: " << e.what() << "\n";
    return kExitIngest;
  }
  int bad = 0;
  for (const auto& f : report.at("files")) {
    const auto name = f.at("file").get<std::string>();
    std::string actual;
    try {
      actual = sha256_file((dir / name).string());
    } catch (const std::exception&) {
      actual = "missing";
    }
    const bool ok = actual == f.at("sha256").get<std::string>();
    out << (ok ? "ok       " : "MISMATCH ") << name << "\n";
    if (!ok) ++bad;
  }
  return bad == 0 ? kExitOk : kExitEmission;
}

void print_report(const RunReport& r, const fs::path& dir, std::ostream& out) {
  out << "nodes " << r.node_count << ", edges " << r.edge_count << "\n";
  if (r.detected_cut) out << "detected stage cut: day " << csv::format_number(r.detected_cut->cut) << "\n";
  if (!r.detection_note.empty()) out << "cut detection: " << r.detection_note << "\n";
  if (r.first_stage + r.second_stage > 0) {
    out << "cut used " << csv::format_number(r.cut_used) << ": first " << r.first_stage << ", second "
        << r.second_stage << ", missing " << r.missing_dfw << "\n";
  }
  for (const auto& f : r.files) out << "wrote " << (dir / f.name).string() << "\n";
  out << "wrote " << (dir / "run_report.json").string() << "\n";
}

std::vector<std::string> preprocess(std::vector<std::string> args) {
  // --config FILE is expanded in place of itself, right after the
  // subcommand, so flags given on the command line win (last value wins).
  std::vector<std::string> file_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    std::string text;
    try {
      text = csv::read_file(path);
    } catch (const IngestError& e) {
      throw CLI::ValidationError("--config", e.what());
    }
    auto more = config_file_args(text, path);
    file_args.insert(file_args.end(), more.begin(), more.end());
    --i;
  }
  if (!file_args.empty()) {
    const auto at = args.empty() ? args.end() : args.begin() + 1;
    args.insert(at, file_args.begin(), file_args.end());
  }
  return args;
}

}  // namespace

std::vector<std::string> config_file_args(const std::string& text, const std::string& source) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", source + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto key = trim(std::string_view(t).substr(0, eq));
    const auto value = trim(std::string_view(t).substr(eq + 1));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    std::replace(key.begin(), key.end(), '_', '-');
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"netspread: network-spread analytics"};
  app.name("netspread");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig cfg;
  std::string out_path;
  std::optional<double> bandwidth;
  std::optional<double> cut_at;
  bool pooled = false;
  std::vector<std::string> skip;
  std::string data;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", "key=value file mirroring the flags; command-line flags override it");
  };
  auto add_out = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--out", out_path, what + " (default under $NETSPREAD_OUT, else ./netspread-out)");
    add_config(sub);
  };
  auto add_inputs = [&](CLI::App* sub, bool required) {
    auto* n = sub->add_option("--nodes", cfg.nodes_path, "nodes CSV (code,name,continent,lon,lat)");
    auto* e = sub->add_option("--edges", cfg.edges_path, "edges CSV (origin,dest,weight)");
    auto* v = sub->add_option("--variables", cfg.variables_path, "variables CSV (code,DFW,...)");
    if (required) {
      n->required();
      e->required();
      v->required();
    }
  };
  auto add_metric_opts = [&](CLI::App* sub) {
    sub->add_option("--reference", cfg.reference, "reference node code for ECCFC")->capture_default_str();
    sub->add_flag("--directed", cfg.directed_paths, "path metrics on the directed graph");
  };
  auto add_quadrant_opts = [&](CLI::App* sub) {
    sub->add_option("--t-cut", cfg.quadrant_t_cut, "quadrant time cut")->capture_default_str();
    sub->add_option("--k-cut", cfg.quadrant_k_cut, "quadrant degree cut")->capture_default_str();
  };
  auto add_cut_opts = [&](CLI::App* sub) {
    sub->add_option("--bandwidth", bandwidth, "KDE bandwidth (default Silverman)");
    sub->add_option("--cut-at,--cut", cut_at, "stage cut in days (default: detected from the density)");
    add_quadrant_opts(sub);
    sub->add_option("--mass-lo", cfg.mass_window_lo, "density mass window start")->capture_default_str();
    sub->add_option("--mass-hi", cfg.mass_window_hi, "density mass window end")->capture_default_str();
  };
  auto add_fit_opts = [&](CLI::App* sub) {
    sub->add_option("--x", cfg.x_column, "predictor column")->capture_default_str();
    sub->add_option("--y", cfg.y_column, "response column")->capture_default_str();
    sub->add_flag("--raw", cfg.raw_fit, "fit raw points instead of per-x means");
  };
  auto add_test_opts = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "significance level")->capture_default_str();
    sub->add_flag("--pooled", pooled, "pooled-variance interval instead of Welch");
    sub->add_flag("--split-then-standardize", cfg.split_then_standardize, "standardize within each stage group");
  };

  auto* ingest = app.add_subcommand("ingest", "validate inputs and write normalized copies");
  add_inputs(ingest, false);
  ingest->get_option("--nodes")->required();
  ingest->get_option("--edges")->required();
  add_out(ingest, "output directory");

  auto* metrics = app.add_subcommand("metrics", "centrality metrics, one column per metric");
  add_inputs(metrics, false);
  metrics->get_option("--nodes")->required();
  metrics->get_option("--edges")->required();
  add_metric_opts(metrics);
  add_out(metrics, "metrics CSV");

  std::vector<std::string> families;
  auto* fitc = app.add_subcommand("fit", "rank curve families on two columns of a CSV");
  fitc->add_option("--data,--input", data, "CSV with the x and y columns")->required();
  fitc->add_option("--families,--family", families, "families to try, e.g. poly1,exp1 (default all)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  add_fit_opts(fitc);
  add_out(fitc, "fit JSON");

  std::string column = "DFW";
  std::size_t points = kDefaultGridPoints;
  bool want_cut = false;
  auto* kdec = app.add_subcommand("kde", "Gaussian kernel density of one column");
  kdec->add_option("--data,--input", data, "CSV holding the column")->required();
  kdec->add_option("--column", column, "column to estimate")->capture_default_str();
  kdec->add_option("--bandwidth", bandwidth, "bandwidth (default Silverman)");
  kdec->add_option("--points", points, "grid points")->capture_default_str();
  kdec->add_flag("--cut", want_cut, "also locate the two-stage cut (JSON sidecar <out>.cut.json)");
  add_out(kdec, "density CSV");

  std::string degree_column = "DEG";
  auto* stagesc = app.add_subcommand("stages", "first/second stage assignment and quadrants");
  stagesc->add_option("--data,--input", data, "CSV with code, DFW and optionally a degree column")->required();
  stagesc->add_option("--cut-at,--cut", cut_at, "stage cut in days (default: detected from the density)");
  stagesc->add_option("--bandwidth", bandwidth, "KDE bandwidth for cut detection");
  stagesc->add_option("--degree-column", degree_column, "degree column for quadrants")->capture_default_str();
  add_quadrant_opts(stagesc);
  add_out(stagesc, "stages CSV");

  auto* ttest = app.add_subcommand("ttest", "stage mean-difference battery");
  ttest->add_option("--data,--input", data, "CSV with code, DFW and the columns to test")->required();
  ttest->add_option("--cut-at,--cut", cut_at, "stage cut in days (default: detected from the density)");
  ttest->add_option("--bandwidth", bandwidth, "KDE bandwidth for cut detection");
  add_test_opts(ttest);
  add_out(ttest, "battery CSV");

  std::string verify_dir;
  auto* reportc = app.add_subcommand("report", "charts and maps, or --verify a finished run");
  add_inputs(reportc, false);
  add_metric_opts(reportc);
  add_cut_opts(reportc);
  add_fit_opts(reportc);
  add_test_opts(reportc);
  reportc->add_option("--verify", verify_dir, "directory whose run_report.json digests to check");
  add_out(reportc, "output directory");

  auto* runc = app.add_subcommand("run", "full pipeline");
  add_inputs(runc, true);
  add_metric_opts(runc);
  add_cut_opts(runc);
  add_fit_opts(runc);
  add_test_opts(runc);
  runc->add_option("--skip", skip, "stages not to emit: metrics,kde,stages,fits,battery,charts,map")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',')
      ->check(CLI::IsMember({"metrics", "kde", "stages", "fits", "battery", "charts", "map"}));
  add_out(runc, "output directory");

  try {
    auto args = preprocess(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // --out names a file for single-artifact subcommands and a directory otherwise.
  auto out_file = [&](const std::string& name) { return out_path.empty() ? fs::path(default_out()) / name : fs::path(out_path); };
  cfg.output_dir = out_path.empty() ? fs::path(default_out()) : fs::path(out_path);
  cfg.bandwidth = bandwidth;
  cfg.cut_at = cut_at;
  cfg.variance = pooled ? VarianceModel::Pooled : VarianceModel::Welch;

  try {
    if (ingest->parsed()) {
      const auto net = load_network(cfg.nodes_path, cfg.edges_path);
      std::optional<VariablesTable> table;
      if (!cfg.variables_path.empty()) {
        table = parse_variables(csv::read_file(cfg.variables_path), net, cfg.variables_path);
      }
      write_text(cfg.output_dir / "nodes.csv", write_nodes_csv(net));
      write_text(cfg.output_dir / "edges.csv", write_edges_csv(net));
      out << "nodes " << net.node_count() << ", edges " << net.edge_count() << "\n";
      if (table) {
        write_text(cfg.output_dir / "variables.csv", write_variables_csv(*table, net));
        out << "variables: " << table->column_names().size() << " columns, " << table->missing_rows().size()
            << " nodes without a row\n";
      }
      return kExitOk;
    }

    if (metrics->parsed()) {
      const auto net = load_network(cfg.nodes_path, cfg.edges_path);
      VariablesTable table(net.node_count());
      if (!cfg.variables_path.empty()) {
        table = parse_variables(csv::read_file(cfg.variables_path), net, cfg.variables_path);
      }
      MetricsOptions opts;
      opts.directed_paths = cfg.directed_paths;
      opts.reference = cfg.reference;
      const auto result = compute_all_metrics(net, opts);
      append_metrics(table, result);
      const auto path = out_file("metrics.csv");
      write_text(path, write_variables_csv(table, net));
      nlohmann::ordered_json meta = {{"reference", cfg.reference},
                                     {"path_view", cfg.directed_paths ? "directed" : "undirected"},
                                     {"notes", result.notes}};
      write_text(sidecar(path, ".meta.json"), meta.dump(2) + "\n");
      out << "wrote " << path.string() << "\n";
      return kExitOk;
    }

    if (fitc->parsed()) {
      const auto table = csv::parse(csv::read_file(data), data);
      const auto xy = numeric_pairs(table, cfg.x_column, cfg.y_column, data);
      std::vector<CurveFamily> fams;
      for (const auto& f : families) {
        const auto fam = parse_family(f);
        if (!fam) throw AnalysisError("unknown curve family '" + f + "'");
        fams.push_back(*fam);
      }
      if (fams.empty()) fams.assign(all_families().begin(), all_families().end());
      std::vector<double> fx = xy.x;
      std::vector<double> fy = xy.y;
      if (!cfg.raw_fit) {
        const auto m = group_mean(xy.x, xy.y);
        fx = m.keys;
        fy = m.means;
      }
      const auto ranked = best_fit(fx, fy, fams);
      const auto path = out_file("fits.json");
      write_text(path, fits_json(ranked, cfg.x_column, cfg.y_column, !cfg.raw_fit));
      for (const auto& r : ranked.ranked) {
        out << to_string(r.family) << " adj_r2 " << csv::format_number(r.adj_r2)
            << (r.converged ? "" : " (not converged)") << "\n";
      }
      for (const auto& s : ranked.skipped) out << "skipped " << s.reason << "\n";
      return kExitOk;
    }

    if (kdec->parsed()) {
      const auto table = csv::parse(csv::read_file(data), data);
      const auto values = numeric_column(table, column, data);
      const auto curve = kde_estimate(values, bandwidth, points);
      std::optional<StageCut> cut;
      if (want_cut) cut = find_stage_cut(curve);
      const auto path = out_file("density.csv");
      write_text(path, write_density_csv(curve));
      out << "bandwidth " << csv::format_number(curve.bandwidth) << ", n " << curve.n << "\n";
      if (cut) {
        write_text(sidecar(path, ".cut.json"), stage_cut_json(*cut, curve));
        out << "stage cut " << csv::format_number(cut->cut) << "\n";
      }
      return kExitOk;
    }

    if (stagesc->parsed() || ttest->parsed()) {
      const auto loaded = load_data_table(data);
      double cut = 0.0;
      if (cut_at) {
        cut = *cut_at;
      } else {
        const auto dfw = loaded.table.column(kDfw);
        std::vector<double> v;
        for (const auto& c : dfw) {
          if (c) v.push_back(*c);
        }
        cut = find_stage_cut(kde_estimate(v, bandwidth)).cut;
        out << "detected stage cut " << csv::format_number(cut) << "\n";
      }
      if (stagesc->parsed()) {
        const auto s = assign_stages(loaded.table, cut);
        const bool with_quadrant = loaded.table.has_column(degree_column);
        std::vector<std::string> header{"code", "DFW", "stage"};
        if (with_quadrant) header.push_back("quadrant");
        std::string text = csv::join_row(header);
        const auto dfw = loaded.table.column(kDfw);
        for (std::size_t i = 0; i < loaded.codes.size(); ++i) {
          std::vector<std::string> row{loaded.codes[i], dfw[i] ? csv::format_number(*dfw[i]) : "",
                                       s.stage[i] ? std::string(to_string(*s.stage[i])) : ""};
          if (with_quadrant) {
            const auto& k = loaded.table.column(degree_column)[i];
            row.push_back(dfw[i] && k ? std::string(to_string(
                                            quadrant_classify(*dfw[i], *k, cfg.quadrant_t_cut, cfg.quadrant_k_cut).label))
                                      : "");
          }
          text += csv::join_row(row);
        }
        const auto path = out_file("stages.csv");
        write_text(path, text);
        out << "first " << s.first_count << ", second " << s.second_count << ", missing " << s.missing.size() << "\n";
        return kExitOk;
      }
      BatteryOptions opts;
      opts.alpha = cfg.alpha;
      opts.variance = cfg.variance;
      opts.split_then_standardize = cfg.split_then_standardize;
      const auto battery = stage_ttest_battery(loaded.table, cut, opts);
      const auto path = out_file("battery.csv");
      write_text(path, write_battery_csv(battery));
      write_text(sidecar(path, ".meta.json"), battery_meta_json(battery, cut, opts));
      for (const auto& e : battery) {
        out << e.variable << " "
            << (e.result ? (e.result->significant ? "significant" : "not significant") : "untestable: " + e.note)
            << "\n";
      }
      return kExitOk;
    }

    if (reportc->parsed() && !verify_dir.empty()) return verify_report(verify_dir, out, err);

    if (reportc->parsed()) {
      if (cfg.nodes_path.empty() || cfg.edges_path.empty() || cfg.variables_path.empty()) {
        err << "netspread report: --nodes, --edges and --variables are required unless --verify is given\n";
        return kExitUsage;
      }
      cfg.emit = EmitToggles{false, false, false, false, false, true, true};
    } else {
      for (const auto& s : skip) {
        if (s == "metrics") cfg.emit.metrics = false;
        if (s == "kde") cfg.emit.kde = false;
        if (s == "stages") cfg.emit.stages = false;
        if (s == "fits") cfg.emit.fits = false;
        if (s == "battery") cfg.emit.battery = false;
        if (s == "charts") cfg.emit.charts = false;
        if (s == "map") cfg.emit.map = false;
      }
    }
    const auto report = run_pipeline(cfg);
    print_report(report, cfg.output_dir, out);
    return kExitOk;
  } catch (const PipelineError& e) {
    err << "netspread: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "netspread: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace netspread::cli
