#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <map>
#include <set>

#include "netspread/csv.hpp"
#include "netspread/errors.hpp"
#include "netspread/pipeline.hpp"
#include "oracles.hpp"

namespace netspread {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::TempDir;
using testing::write_text;

RunConfig fixture_config(const fs::path& out) {
  RunConfig c;
  c.nodes_path = (testing::fixture_dir() / "nodes.csv").string();
  c.edges_path = (testing::fixture_dir() / "edges.csv").string();
  c.variables_path = (testing::fixture_dir() / "variables.csv").string();
  c.output_dir = out;
  return c;
}

std::map<std::string, std::string> digests(const RunReport& r) {
  std::map<std::string, std::string> out;
  for (const auto& f : r.files) out[f.name] = f.sha256;
  return out;
}

std::vector<std::string> column(const fs::path& csv, std::size_t idx) {
  std::vector<std::string> out;
  for (const auto& row : csv::parse(read_text(csv)).rows) out.push_back(row.at(idx));
  return out;
}

class FixtureRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir;
    report_ = new RunReport(run_pipeline(fixture_config(dir_->path() / "out")));
  }
  static void TearDownTestSuite() {
    delete report_;
    delete dir_;
  }
  static fs::path out() { return dir_->path() / "out"; }

  static TempDir* dir_;
  static RunReport* report_;
};

TempDir* FixtureRun::dir_ = nullptr;
RunReport* FixtureRun::report_ = nullptr;

TEST_F(FixtureRun, EmitsEveryArtifact) {
  for (const char* name : {"metrics.csv", "metrics.meta.json", "density.csv", "stage_cut.json", "stages.csv",
                           "fits.json", "boxstats.json", "battery.csv", "battery.meta.json", "scatter.svg",
                           "errorbars.svg", "eccfc_boxplots.svg", "map_dfw.geojson", "map_dfw.svg",
                           "map_stages.geojson", "map_stages.svg", "run_report.json"}) {
    EXPECT_TRUE(fs::exists(out() / name)) << name;
  }
  EXPECT_FALSE(fs::exists(out() / ".netspread-staging"));
}

TEST_F(FixtureRun, ReportListsFilesWithMatchingDigests) {
  const auto j = nlohmann::json::parse(read_text(out() / "run_report.json"));
  ASSERT_FALSE(j["files"].empty());
  for (const auto& f : j["files"]) {
    const auto name = f["file"].get<std::string>();
    EXPECT_NE(name, "run_report.json");
    EXPECT_EQ(f["bytes"].get<std::uintmax_t>(), fs::file_size(out() / name)) << name;
  }
  EXPECT_EQ(j["nodes"], report_->node_count);
  EXPECT_EQ(j["stage_counts"]["first"].get<std::size_t>() + j["stage_counts"]["second"].get<std::size_t>() +
                j["stage_counts"]["missing_dfw"].get<std::size_t>(),
            report_->node_count);
}

TEST_F(FixtureRun, EveryNodeAppearsExactlyOnce) {
  std::set<std::string> codes;
  for (const auto& c : column(testing::fixture_dir() / "nodes.csv", 0)) codes.insert(c);
  for (const char* name : {"metrics.csv", "stages.csv"}) {
    const auto col = column(out() / name, 0);
    EXPECT_EQ(col.size(), codes.size()) << name;
    EXPECT_EQ(std::set<std::string>(col.begin(), col.end()), codes) << name;
  }
  const auto geo = nlohmann::json::parse(read_text(out() / "map_dfw.geojson"));
  std::multiset<std::string> seen;
  for (const auto& f : geo["features"]) seen.insert(f["properties"]["code"].get<std::string>());
  EXPECT_EQ(seen.size(), codes.size());
  EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()), codes);
}

TEST_F(FixtureRun, CsvOutputsUseLfAndHeaders) {
  for (const char* name : {"metrics.csv", "density.csv", "stages.csv", "battery.csv"}) {
    const auto text = read_text(out() / name);
    EXPECT_EQ(text.find('\r'), std::string::npos) << name;
    ASSERT_FALSE(text.empty());
    EXPECT_EQ(text.back(), '\n') << name;
  }
  EXPECT_EQ(read_text(out() / "density.csv").rfind("grid_x,density\n", 0), 0u);
}

TEST_F(FixtureRun, ConfigEchoIncludesDefaults) {
  const auto j = nlohmann::json::parse(read_text(out() / "run_report.json"))["config"];
  EXPECT_EQ(j["reference"], "CHN");
  EXPECT_EQ(j["directed"], false);
  EXPECT_EQ(j["bandwidth"], "silverman");
  EXPECT_EQ(j["cut_at"], "detect");
  EXPECT_EQ(j["alpha"], 0.05);
  EXPECT_EQ(j["pooled"], false);
  EXPECT_EQ(j["x"], "DFW");
  EXPECT_EQ(j["y"], "DEG");
  EXPECT_EQ(j["t_cut"], 44.0);
  EXPECT_EQ(j["k_cut"], 15.0);
  EXPECT_EQ(j["mass_window"][0], 20.0);
  EXPECT_EQ(j["mass_window"][1], 70.0);
  for (const char* key : {"metrics", "kde", "stages", "fits", "battery", "charts", "map"}) {
    EXPECT_EQ(j["emit"][key], true) << key;
  }
}

TEST_F(FixtureRun, DetectedCutSplitsTheTwoWaves) {
  ASSERT_TRUE(report_->detected_cut.has_value());
  EXPECT_GT(report_->cut_used, 30.0);
  EXPECT_LT(report_->cut_used, 60.0);
  EXPECT_GT(report_->first_stage, 0u);
  EXPECT_GT(report_->second_stage, 0u);
  ASSERT_TRUE(report_->mass_in_window.has_value());
  EXPECT_GT(*report_->mass_in_window, 0.5);
  EXPECT_LE(*report_->mass_in_window, 1.0);
}

TEST_F(FixtureRun, SecondRunIsByteIdentical) {
  TempDir other;
  const auto again = run_pipeline(fixture_config(other.path() / "out"));
  EXPECT_EQ(digests(again), digests(*report_));
  // Apart from the echoed output directory the reports match too.
  auto a = nlohmann::json::parse(read_text(other.path() / "out" / "run_report.json"));
  auto b = nlohmann::json::parse(read_text(out() / "run_report.json"));
  a["config"].erase("out");
  b["config"].erase("out");
  EXPECT_EQ(a, b);
}

TEST(Pipeline, MissingEdgesFailsAtIngestWithNothingWritten) {
  TempDir dir;
  auto c = fixture_config(dir.path() / "out");
  c.edges_path = (dir.path() / "nope.csv").string();
  try {
    run_pipeline(c);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_EQ(e.exit_code(), kExitIngest);
    EXPECT_EQ(exit_code_for(e), kExitIngest);
  }
  EXPECT_FALSE(fs::exists(dir.path() / "out"));
}

TEST(Pipeline, FailureLeavesExistingOutputDirUntouched) {
  TempDir dir;
  const auto out = dir.path() / "out";
  fs::create_directories(out);
  write_text(out / "keep.txt", "x\n");
  auto c = fixture_config(out);
  c.y_column = "NOPE";
  EXPECT_THROW(run_pipeline(c), PipelineError);
  EXPECT_TRUE(fs::exists(out / "keep.txt"));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(out)) ++entries;
  EXPECT_EQ(entries, 1u);
}

TEST(Pipeline, InvalidConfigIsAnAnalysisError) {
  TempDir dir;
  auto c = fixture_config(dir.path() / "out");
  c.alpha = 1.5;
  try {
    run_pipeline(c);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.exit_code(), kExitAnalysis);
  }
  c.alpha = 0.05;
  c.bandwidth = -1.0;
  EXPECT_THROW(c.validate(), AnalysisError);
}

TEST(Pipeline, ExitCodeMapping) {
  EXPECT_EQ(exit_code_for(IngestError("x")), kExitIngest);
  EXPECT_EQ(exit_code_for(AnalysisError("x")), kExitAnalysis);
  EXPECT_EQ(exit_code_for(EmissionError("x")), kExitEmission);
  EXPECT_EQ(exit_code_for(PipelineError("fits", kExitAnalysis, "x")), kExitAnalysis);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitAnalysis);
}

TEST(Pipeline, SmallNetworkWithExplicitCut) {
  TempDir dir;
  write_text(dir.path() / "nodes.csv",
             "code,name,continent,lon,lat\n"
             "AAA,A,Asia,100,30\nBBB,B,Europe,10,50\nCCC,C,Africa,20,0\nDDD,D,Oceania,150,-30\n"
             "EEE,E,South America,-60,-20\n");
  write_text(dir.path() / "edges.csv",
             "origin,dest,weight\nAAA,BBB,5\nBBB,CCC,2\nCCC,DDD,1\nBBB,EEE,3\nAAA,EEE,4\n");
  write_text(dir.path() / "variables.csv",
             "code,DFW,GI,POP,HC\nAAA,0,1,10,1\nBBB,20,2,20,2\nCCC,50,3,30,\nDDD,60,4,40,\nEEE,25,5,,3\n");
  RunConfig c;
  c.nodes_path = (dir.path() / "nodes.csv").string();
  c.edges_path = (dir.path() / "edges.csv").string();
  c.variables_path = (dir.path() / "variables.csv").string();
  c.output_dir = dir.path() / "out";
  c.cut_at = 30.0;
  c.reference = "AAA";
  const auto r = run_pipeline(c);
  EXPECT_EQ(r.node_count, 5u);
  EXPECT_EQ(r.first_stage, 3u);
  EXPECT_EQ(r.second_stage, 2u);
  EXPECT_EQ(r.cut_used, 30.0);
  const auto battery = read_text(c.output_dir / "battery.csv");
  EXPECT_NE(battery.find("\nHC,2D,3,0,,,,NA\n"), std::string::npos) << battery;
}

}  // namespace
}  // namespace netspread
