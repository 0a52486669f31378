#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mgraph/edge_list.hpp"
#include "mgraph/genmodel.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;  // stdout, or stdout+stderr when merged
};

Outcome run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(MGRAPH_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  Outcome o;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) o.out.append(buf, got);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

json run_json(const std::string& args) {
  auto o = run(args);
  EXPECT_EQ(o.code, 0) << args;
  return json::parse(o.out);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Drops timing fields and the thread count so reports can be compared.
json normalized(json j) {
  if (j.is_object()) {
    j.erase("wall_time_ms");
    if (j.contains("config")) {
      j["config"].erase("threads");
      j["config"].erase("argv");
    }
    for (auto& [k, v] : j.items()) v = normalized(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = normalized(v);
  }
  return j;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("mgraph_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "p4.txt") << "0 1\n1 2\n2 3\n";
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string at(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, GenerateWritesFileAndSidecarDeterministically) {
  auto j = run_json("generate --model cm --n 1000 --beta 2.5 --seed 1 --out " + at("g.txt"));
  std::string first = slurp(dir / "g.txt");
  std::string side = slurp(dir / "g.txt.json");
  run_json("generate --model cm --n 1000 --beta 2.5 --seed 1 --out " + at("g.txt"));
  EXPECT_EQ(slurp(dir / "g.txt"), first);
  EXPECT_EQ(slurp(dir / "g.txt.json"), side);

  // The file holds exactly the library's graph.
  auto lib = mgraph::generate({mgraph::ModelKind::CM, 1000, 2.5, mgraph::WeightMode::DeterministicQuantile, 1});
  auto loaded = mgraph::load_edge_list(at("g.txt"));
  EXPECT_EQ(loaded.graph, lib.graph);
  EXPECT_EQ(j["vertices"], lib.graph.num_vertices());
  EXPECT_EQ(j["edges"], lib.graph.num_edges());
  std::size_t hist_total = 0;
  for (auto& [d, c] : j["degree_histogram"].items()) hist_total += c.get<std::size_t>();
  EXPECT_EQ(hist_total, lib.graph.num_vertices());
  EXPECT_EQ(json::parse(side)["spec"]["kind"], "CM");
  EXPECT_EQ(j["version"], "0.1.0");
}

TEST_F(Cli, GenerateRejectsBadBeta) {
  auto o = run("generate --model cm --n 1000 --beta 1.0 --seed 1", true);
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.out.find("degree distribution undefined"), std::string::npos);
  EXPECT_EQ(run("generate --model cm --n 1000 --beta 2.5 --out /nonexistent/dir/g.txt").code, 2);
}

TEST_F(Cli, AnalyzeIfubOnPath) {
  auto j = run_json("analyze --algo ifub --input " + at("p4.txt"));
  EXPECT_EQ(j["results"][0]["value"], 3);
  EXPECT_EQ(j["results"][0]["algo"], "ifub");
  EXPECT_TRUE(j["results"][0].contains("bfs_count"));
}

TEST_F(Cli, AnalyzeAllAgrees) {
  auto j = run_json("analyze --algo all --model cm --n 2000 --beta 2.5 --seed 3");
  EXPECT_TRUE(j["exact_agree"].get<bool>());
  EXPECT_EQ(j["table"].size(), 7u);
  for (const auto& row : j["table"])
    if (row.contains("abs_error")) {
      EXPECT_GE(row["abs_error"].get<long long>(), 0);
    }
  EXPECT_EQ(j["topk"]["entries"].size(), 10u);
}

TEST_F(Cli, AnalyzeUnknownAlgorithm) {
  auto o = run("analyze --algo magic --input " + at("p4.txt"), true);
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.out.find("Usage"), std::string::npos);
  EXPECT_EQ(run("analyze --algo ifub").code, 2);  // no graph source
  EXPECT_EQ(run("analyze --algo ifub --input " + at("missing.txt")).code, 2);
}

TEST_F(Cli, VerifyTouchWritesSeries) {
  auto j = run_json("verify --property 2 --x 0.6 --y 0.6 --pairs 2000 --model cm --n 5000 --beta 2.5 --seed 1 --out-prefix " +
                    at("run_"));
  EXPECT_EQ(j["report"]["property_id"], 2);
  std::string csv = slurp(dir / "run_property2.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "slack,count,percent");
  std::size_t total = 0;
  for (auto& [k, c] : j["report"]["histogram"].items()) total += c.get<std::size_t>();
  for (auto& [k, c] : j["report"]["rejected"].items()) total += c.get<std::size_t>();
  EXPECT_EQ(total, 2000u);
}

TEST_F(Cli, VerifyDegreeAndBadProperty) {
  auto j = run_json("verify --property 4 --model cm --n 20000 --beta 2.5 --seed 1");
  EXPECT_TRUE(j["report"]["values"].contains("slope"));
  EXPECT_EQ(run("verify --property 5 --input " + at("p4.txt")).code, 2);
  EXPECT_EQ(run("verify --property 4 --input " + at("p4.txt")).code, 2);  // beta unknown
}

TEST_F(Cli, Predict) {
  auto dense = run_json("predict --beta 1.5 --n 100000")["prediction"];
  EXPECT_EQ(dense["d_avg_tilde"], 3.0);
  EXPECT_NEAR(dense["c_exponent"].get<double>(), -1.0, 1e-12);
  EXPECT_TRUE(dense.contains("note"));
  auto o = run("predict --beta 2.0", true);
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.out.find("open case"), std::string::npos);
  auto small = run_json("predict --beta 3.5 --n 100000")["prediction"];
  EXPECT_GT(small["M1_mu"].get<double>(), 1.0);
  EXPECT_GT(small["eta1"].get<double>(), 0.0);
  EXPECT_EQ(small["regime"], "beta>3");
}

TEST_F(Cli, OracleBuildQueryStats) {
  auto b = run_json("oracle build --input " + at("p4.txt") + " --labels " + at("p4.pll"));
  EXPECT_EQ(b["stats"]["total_entries"], 8);
  auto q = run_json("oracle query --labels " + at("p4.pll") + " 0 3");
  EXPECT_EQ(q["distance"], 3);
  auto s = run_json("oracle stats --labels " + at("p4.pll"));
  std::vector<std::string> keys;
  for (auto& [k, v] : s["stats"].items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"avg_label_size", "max_label_size", "total_entries", "estimated_bytes"}));
  EXPECT_EQ(s["stats"], b["stats"]);
  EXPECT_EQ(run("oracle query --labels " + at("none.pll") + " 0 1").code, 2);
  EXPECT_EQ(run("oracle query --labels " + at("p4.pll") + " 0 9").code, 2);
}

TEST_F(Cli, StatsReport) {
  auto j = run_json("stats --input " + at("p4.txt") + " --tau-x 0.5 --out-prefix " + at("st_"));
  EXPECT_EQ(j["diameter"], 3);
  EXPECT_EQ(j["radius"], 2);
  EXPECT_NEAR(j["average_distance"]["mean"].get<double>(), 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(j["C"].get<double>(), 2.5, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "st_tau.csv"));
}

TEST_F(Cli, ReplayAndThreadIndependence) {
  std::string args = "verify --property 1 --x 0.5 --model nr --n 20000 --beta 2.5 --seed 4";
  auto one = run("--threads 1 " + args);
  auto four = run("--threads 4 " + args);
  ASSERT_EQ(one.code, 0);
  ASSERT_EQ(four.code, 0);
  EXPECT_EQ(normalized(json::parse(one.out)), normalized(json::parse(four.out)));
  std::ofstream(dir / "report.json") << one.out;
  auto again = run_json("replay " + at("report.json"));
  EXPECT_EQ(json::parse(one.out), again);
}

TEST_F(Cli, HelpAndVersion) {
  EXPECT_EQ(run("--version").code, 0);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}
