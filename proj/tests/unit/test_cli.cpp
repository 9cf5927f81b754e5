#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

namespace netspread {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::TempDir;
using testing::write_text;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const char* name) { return (testing::fixture_dir() / name).string(); }

std::vector<std::string> inputs() {
  return {"--nodes", fx("nodes.csv"), "--edges", fx("edges.csv"), "--variables", fx("variables.csv")};
}

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

TEST(Cli, IngestNormalizesInputs) {
  TempDir dir;
  const auto r = call(with({"ingest"}, with(inputs(), {"--out", dir.path().string()})));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name : {"nodes.csv", "edges.csv", "variables.csv"}) {
    const auto text = read_text(dir.path() / name);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.back(), '\n');
  }
}

TEST(Cli, MetricsThenStagesThenTtest) {
  TempDir dir;
  const auto metrics = (dir.path() / "m.csv").string();
  auto r = call(with({"metrics"}, with(inputs(), {"--out", metrics})));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir.path() / "m.meta.json"));
  EXPECT_EQ(read_text(metrics).rfind("code,", 0), 0u);

  const auto stages = (dir.path() / "s.csv").string();
  r = call({"stages", "--data", metrics, "--cut-at", "44", "--out", stages});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text(stages).rfind("code,DFW,stage,quadrant\n", 0), 0u);

  const auto battery = (dir.path() / "b.csv").string();
  r = call({"ttest", "--data", metrics, "--out", battery});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("detected stage cut"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "b.meta.json"));
}

TEST(Cli, KdeAndFit) {
  TempDir dir;
  const auto density = (dir.path() / "d.csv").string();
  auto r = call({"kde", "--data", fx("variables.csv"), "--column", "DFW", "--cut", "--out", density});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir.path() / "d.cut.json"));
  const auto cut = nlohmann::json::parse(read_text(dir.path() / "d.cut.json"));
  EXPECT_GT(cut["cut"].get<double>(), 30.0);
  EXPECT_LT(cut["cut"].get<double>(), 60.0);

  write_text(dir.path() / "xy.csv", "code,DFW,DEG\nA,0,10\nB,10,8.3\nC,20,7\nD,30,5.9\nE,40,5.1\n");
  const auto fits = (dir.path() / "f.json").string();
  r = call({"fit", "--data", (dir.path() / "xy.csv").string(), "--x", "DFW", "--y", "DEG", "--families",
            "Poly1,Exp1", "--raw", "--out", fits});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_text(fits));
  EXPECT_EQ(j["ranked"].size(), 2u);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  TempDir dir;
  const auto cfg = dir.path() / "run.cfg";
  write_text(cfg, "# comment\nnodes=" + fx("nodes.csv") + "\nedges = " + fx("edges.csv") + "\nvariables=" +
                      fx("variables.csv") + "\nalpha=0.5\ncut_at=40\nskip=map,charts\n");
  const auto out = dir.path() / "out";
  const auto r = call({"run", "--config", cfg.string(), "--alpha", "0.1", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_text(out / "run_report.json"));
  EXPECT_EQ(j["config"]["alpha"], 0.1);
  EXPECT_EQ(j["config"]["cut_at"], 40.0);
  EXPECT_EQ(j["config"]["emit"]["map"], false);
  EXPECT_FALSE(fs::exists(out / "map_dfw.svg"));
  EXPECT_TRUE(fs::exists(out / "battery.csv"));
}

TEST(Cli, BadConfigLineIsUsageError) {
  TempDir dir;
  write_text(dir.path() / "bad.cfg", "alpha 0.1\n");
  EXPECT_EQ(call({"run", "--config", (dir.path() / "bad.cfg").string()}).code, 1);
  EXPECT_THROW(cli::config_file_args("novalue\n", "x"), std::exception);
  const auto args = cli::config_file_args("t_cut = 40\n\n# c\n", "x");
  ASSERT_EQ(args.size(), 1u);
  EXPECT_EQ(args[0], "--t-cut=40");
}

TEST(Cli, OutputDefaultsToEnvironment) {
  TempDir dir;
  const auto target = dir.path() / "envout";
  ::setenv("NETSPREAD_OUT", target.string().c_str(), 1);
  const auto r = call({"kde", "--data", fx("variables.csv")});
  ::unsetenv("NETSPREAD_OUT");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(target / "density.csv"));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(call({"bogus"}).code, 1);
  EXPECT_EQ(call({"metrics", "--no-such-flag"}).code, 1);
  EXPECT_EQ(call({"run", "--help"}).code, 0);

  const auto missing = call({"run", "--nodes", (dir.path() / "none.csv").string(), "--edges", fx("edges.csv"),
                             "--variables", fx("variables.csv"), "--out", (dir.path() / "o").string()});
  EXPECT_EQ(missing.code, 2);
  EXPECT_FALSE(fs::exists(dir.path() / "o"));

  write_text(dir.path() / "uni.csv", "code,DFW\nA,10\nB,11\nC,12\nD,13\nE,12\n");
  EXPECT_EQ(call({"kde", "--data", (dir.path() / "uni.csv").string(), "--cut", "--out",
                  (dir.path() / "d.csv").string()})
                .code,
            3);

  write_text(dir.path() / "blocker", "file\n");
  EXPECT_EQ(call({"kde", "--data", fx("variables.csv"), "--out", (dir.path() / "blocker" / "d.csv").string()}).code,
            4);
}

TEST(Cli, ReportVerify) {
  TempDir dir;
  const auto out = dir.path() / "out";
  ASSERT_EQ(call(with({"run"}, with(inputs(), {"--out", out.string()}))).code, 0);
  auto r = call({"report", "--verify", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);

  write_text(out / "stages.csv", "tampered\n");
  r = call({"report", "--verify", out.string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("MISMATCH"), std::string::npos);

  EXPECT_EQ(call({"report"}).code, 1);
}

TEST(Cli, ReportDrawsChartsAndMaps) {
  TempDir dir;
  const auto out = dir.path() / "out";
  const auto r = call(with({"report"}, with(inputs(), {"--out", out.string()})));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "scatter.svg"));
  EXPECT_TRUE(fs::exists(out / "map_stages.geojson"));
  EXPECT_FALSE(fs::exists(out / "battery.csv"));
}

}  // namespace
}  // namespace netspread
