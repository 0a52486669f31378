// Acceptance checks, one per criterion. `acceptance <id>` runs a single
// criterion, `acceptance` runs all of them. Each prints exactly one line
//   criterion <id> PASS|FAIL: <summary>
// on stdout; per-instance detail goes to stderr. The exit status is nonzero
// when any selected criterion fails.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgraph/mgraph.hpp"
#include "test_support.hpp"

using namespace mgraph;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

Graph cm(std::size_t n, double beta, std::uint64_t seed, ModelKind kind = ModelKind::CM) {
  return generate({kind, n, beta, WeightMode::DeterministicQuantile, seed}).graph;
}

std::ostream& log() { return std::cerr << "  "; }

// 1 -------------------------------------------------------------------------
Outcome exactness_suite() {
  auto suite = testing_support::model_suite(50, 2000);
  std::size_t mismatches = 0, pairs_checked = 0;
  for (const auto& sg : suite) {
    const Graph& g = sg.graph;
    const std::size_t n = g.num_vertices();
    // All-pairs brute force.
    std::vector<std::vector<Distance>> dist(n);
    std::vector<std::uint64_t> far(n);
    Distance D = 0, R = kUnreached;
    {
      Bfs b(g);
      for (VertexId s = 0; s < n; ++s) {
        auto d = b.run(s);
        dist[s].assign(d.begin(), d.end());
        far[s] = b.last_distance_sum();
        D = std::max(D, b.last_eccentricity());
        R = std::min(R, b.last_eccentricity());
      }
    }
    std::size_t bad = 0;
    bad += ifub(g).value != D;
    auto ess = exact_sumsweep(g, {.seed = sg.spec.seed});
    bad += ess.diameter.value != D;
    bad += ess.radius.value != R;
    std::vector<TopKEntry> ranked(n);
    for (VertexId v = 0; v < n; ++v) ranked[v] = {v, far[v]};
    std::sort(ranked.begin(), ranked.end(),
              [](const TopKEntry& a, const TopKEntry& c) { return a.farness != c.farness ? a.farness < c.farness : a.vertex < c.vertex; });
    for (std::size_t k : {1, 10}) {
      std::vector<TopKEntry> want(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)));
      bad += bcm_topk(g, std::min(k, n)).entries != want;
    }
    auto labels = build_labels(g);
    if (n <= 500) {
      for (VertexId s = 0; s < n; ++s)
        for (VertexId t = 0; t < n; ++t) bad += labels.query(s, t) != dist[s][t];
      pairs_checked += n * n;
    } else {
      SplitMix64 rng(sg.spec.seed);
      for (int i = 0; i < 10000; ++i) {
        auto s = static_cast<VertexId>(rng.below(n));
        auto t = static_cast<VertexId>(rng.below(n));
        bad += labels.query(s, t) != dist[s][t];
      }
      pairs_checked += 10000;
    }
    if (bad) log() << to_string(sg.spec.kind) << " beta " << sg.spec.beta << " n " << sg.spec.n << ": " << bad << " mismatches\n";
    mismatches += bad;
  }
  return {mismatches == 0, std::to_string(suite.size()) + " graphs, " + std::to_string(pairs_checked) +
                               " oracle pairs, " + std::to_string(mismatches) + " mismatches"};
}

// 2 -------------------------------------------------------------------------
Outcome two_sweep_accuracy() {
  std::string summary;
  bool pass = true;
  for (double beta : {1.5, 2.5, 3.5}) {
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Graph g = cm(100000, beta, seed);
      Distance D = ifub(g).value;
      Distance v = two_sweep(g, std::nullopt, seed).value;
      bool ok = beta < 2 ? D - v <= 2 : static_cast<double>(D - v) <= 0.1 * D;
      good += ok;
      log() << "beta " << beta << " seed " << seed << ": D " << D << " two_sweep " << v << '\n';
    }
    pass = pass && good >= 18;
    summary += "beta " + fmt(beta, 1) + " " + std::to_string(good) + "/20; ";
  }
  return {pass, summary + "need 18/20 each"};
}

// 3 -------------------------------------------------------------------------
Outcome sumsweep_tightness() {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Graph g = cm(100000, 2.5, seed);
    Distance D = ifub(g).value;
    Distance L = sumsweep_heuristic(g, 10, seed).result.value;
    good += L == D;
    log() << "seed " << seed << ": D " << D << " max L " << L << '\n';
  }
  return {good >= 18, std::to_string(good) + "/20 seeds exact, need 18"};
}

// 4 -------------------------------------------------------------------------
Outcome sampling_vs_two_sweep() {
  bool pass = true;
  std::string summary;
  for (double beta : {1.5, 2.5, 3.5}) {
    double gap_sample = 0, gap_sweep = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Graph g = cm(100000, beta, seed);
      double D = ifub(g).value;
      gap_sample += D - sample_lower_bound(g, 2, seed).value;
      gap_sweep += D - two_sweep(g, std::nullopt, seed).value;
    }
    gap_sample /= 20;
    gap_sweep /= 20;
    pass = pass && gap_sample > gap_sweep;
    if (!summary.empty()) summary += "; ";
    summary += "beta " + fmt(beta, 1) + " sampling " + fmt(gap_sample, 2) + " vs 2-sweep " + fmt(gap_sweep, 2);
  }
  return {pass, summary};
}

// 5 -------------------------------------------------------------------------
Outcome rw_guarantee() {
  std::size_t runs = 0, below = 0;
  auto check = [&](const Graph& g, Distance D, std::uint64_t seed) -> std::optional<Distance> {
    try {
      auto r = rw_approx(g, seed);
      ++runs;
      if (r.value < (2 * D + 2) / 3) {
        ++below;
        log() << "rw " << r.value << " below ceil(2D/3) with D " << D << '\n';
      }
      return r.value;
    } catch (const Error&) {
      log() << "rw failed (seed " << seed << ")\n";
      return std::nullopt;
    }
  };
  for (const auto& sg : testing_support::model_suite(50, 2000))
    if (sg.graph.num_vertices() >= 4) check(sg.graph, exact_diameter(sg.graph), sg.spec.seed);
  int wins = 0;
  Graph g = cm(100000, 2.5, 1);
  Distance D = ifub(g).value;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto v = check(g, D, seed);
    if (v && *v >= two_sweep(g, std::nullopt, seed).value) ++wins;
  }
  return {below == 0 && wins >= 16, std::to_string(runs) + " runs, " + std::to_string(below) +
                                        " below ceil(2D/3); head-to-head " + std::to_string(wins) + "/20 (need 16)"};
}

// 6 -------------------------------------------------------------------------
Outcome property_suite() {
  const std::size_t targets = 10000;
  int total = 0, passed = 0;
  std::map<std::string, int> fails;
  for (auto kind : {ModelKind::CM, ModelKind::CL, ModelKind::NR})
    for (double beta : {1.5, 2.5, 3.5})
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Graph g = cm(100000, beta, seed, kind);
        auto dev = verify_dev(g, 0.5);
        auto touch = verify_touch(g, 0.6, 0.6, 10000, seed);
        auto untouch = verify_untouch(g, targets, 0.05, seed);
        auto deg = verify_degree(g, beta);
        bool ok_dev = dev.pass(), ok_touch = touch.pass(), ok_untouch = untouch.verdict("z_ge_1").pass, ok_deg = deg.pass();
        ++total;
        if (ok_dev && ok_touch && ok_untouch && ok_deg) ++passed;
        if (!ok_dev) ++fails["dev"];
        if (!ok_touch) ++fails["touch"];
        if (!ok_untouch) ++fails["untouch"];
        if (!ok_deg) ++fails["degree"];
        log() << to_string(kind) << " beta " << beta << " seed " << seed << ": dev<=1 "
              << fmt(dev.verdict("part_a_at_most_1").observed) << " dev<=2 " << fmt(dev.verdict("part_a_at_most_2").observed)
              << " touch " << fmt(touch.values.at("strict_share")) << " untouch excess(z>=1) "
              << fmt(untouch.values.at("max_excess_z_ge_1")) << " (all z " << fmt(untouch.values.at("max_excess_all_z"))
              << ") slope " << fmt(deg.verdict("slope").observed) << '\n';
      }
  std::string summary = std::to_string(passed) + "/" + std::to_string(total) + " graphs pass all four";
  for (auto& [k, v] : fails) summary += "; " + k + " failed on " + std::to_string(v);
  return {passed == total, summary};
}

// 7 -------------------------------------------------------------------------
Outcome asymptotic_trends() {
  Graph small = cm(10000, 3.5, 1), big = cm(100000, 3.5, 1);
  double a_small = average_distance(small, 1000, 1).mean, a_big = average_distance(big, 1000, 1).mean;
  double ratio = a_big / a_small, target = std::log(1e5) / std::log(1e4);
  bool a = std::abs(ratio / target - 1.0) <= 0.25;

  Graph u = cm(100000, 2.5, 1);
  double D = ifub(u).value;
  auto p = predict(2.5, u.num_vertices());
  double measured = D / std::log(static_cast<double>(u.num_vertices()));
  double theory = 2.0 / -std::log(p.eta1);
  bool b = measured <= 2 * theory && measured >= theory / 2;

  Graph d = cm(100000, 1.5, 1);
  double avg = average_distance(d, 1000, 1).mean;
  bool c = avg >= 2.0 && avg <= 3.5;
  auto pd = predict(1.5, d.num_vertices());
  Distance Dd = ifub(d).value;

  std::string s = "(a) ratio " + fmt(ratio) + " vs " + fmt(target) + (a ? " ok" : " off") + "; (b) D/log n " + fmt(measured) +
                  " vs " + fmt(theory) + (b ? " ok" : " off") + "; (c) avg " + fmt(avg) + (c ? " ok" : " off") +
                  "; dense D " + std::to_string(Dd) + " vs " + fmt(pd.diameter_pred, 0) + " or " +
                  fmt(pd.diameter_pred_alt.value_or(NAN), 0) + " (reported only)";
  return {a && b && c, s};
}

// 8 -------------------------------------------------------------------------
Outcome empirical_constants() {
  bool pass = true;
  std::string c_part, C_part;
  double eta1 = 0, Cp = 0, rel_sum = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = cm(100000, 2.5, seed);
    auto fit = estimate_c_tail(tau_table(g, {0.5}), 0.5);
    eta1 = predict(2.5, g.num_vertices()).eta1;
    bool ok = std::abs(fit.c - eta1) <= 0.15;
    pass = pass && ok;
    c_part += (c_part.empty() ? "" : ", ") + fmt(fit.c) + (ok ? "" : " (off)");
  }
  // Each seed must land within the band on its own; the mean is only reported.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Graph g = cm(100000, 3.5, seed);
    auto ess = exact_sumsweep(g, {.seed = seed});
    double C = estimate_constant_C(g, 1000, seed, ess.diameter.value);
    Cp = *predict(3.5, g.num_vertices()).C;
    double rel = C / Cp - 1.0;
    rel_sum += rel;
    bool ok = std::abs(rel) <= 0.3;
    pass = pass && ok;
    C_part += (C_part.empty() ? "" : ", ") + fmt(C) + " (" + (rel >= 0 ? "+" : "") + fmt(100 * rel, 0) + "%" +
              (ok ? "" : ", off") + ")";
  }
  return {pass, "c vs eta1 " + fmt(eta1) + ": " + c_part + " (band 0.15); C vs " + fmt(Cp) + ": " + C_part +
                    " (band 30%, 3-seed mean " + (rel_sum >= 0 ? "+" : "") + fmt(100 * rel_sum / 3, 0) + "%)"};
}

// 9 -------------------------------------------------------------------------
Outcome cost_scaling() {
  int good = 0;
  std::string s;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    double prev_ifub = INFINITY, prev_label = INFINITY;
    bool mono = true;
    for (std::size_t n : {10000, 30000, 100000}) {
      Graph g = cm(n, 2.5, seed);
      const double gn = static_cast<double>(g.num_vertices());
      double r_ifub = static_cast<double>(ifub(g).bfs_count) / gn;
      double r_label = build_labels(g).stats().avg_label_size / gn;
      log() << "seed " << seed << " n " << n << ": ifub bfs/n " << r_ifub << " avg label/n " << r_label << '\n';
      mono = mono && r_ifub < prev_ifub && r_label < prev_label;
      prev_ifub = r_ifub;
      prev_label = r_label;
    }
    good += mono;
  }
  return {good >= 2, std::to_string(good) + "/3 seeds monotone in both, need 2"};
}

// 10 ------------------------------------------------------------------------
struct Run {
  int code;
  std::string out;
};

Run shell(const std::string& cmd) {
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  Run r{-1, {}};
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Timing fields and the embedded run configuration (which records the
/// thread count and paths) legitimately differ between runs.
json payload(json j) {
  if (j.is_object()) {
    j.erase("wall_time_ms");
    j.erase("config");
    j.erase("output");
    j.erase("series_csv");
    j.erase("source");
    for (auto& [k, v] : j.items()) v = payload(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = payload(v);
  }
  return j;
}

Outcome determinism() {
  const std::string cli = MGRAPH_CLI_PATH;
  fs::path root = fs::temp_directory_path() / ("mgraph_accept_" + std::to_string(::getpid()));
  fs::create_directories(root);
  struct Pipeline {
    std::string graph, analyze, verify;
  };
  auto pipeline = [&](const std::string& tag, unsigned threads, const std::string& model) {
    fs::path dir = root / tag;
    fs::create_directories(dir);
    std::string t = " --threads " + std::to_string(threads) + " ";
    std::string file = (dir / "g.txt").string();
    Pipeline p;
    auto gen = shell(cli + t + "generate " + model + " --out " + file);
    auto ana = shell(cli + t + "analyze --algo all --seed 7 --input " + file);
    std::string v;
    for (int prop : {1, 2, 3, 4}) {
      auto r = shell(cli + t + "verify --property " + std::to_string(prop) +
                     " --pairs 2000 --targets 300 --beta 2.5 --seed 7 --input " + file + " --out-prefix " + (dir / "s_").string());
      if (r.code != 0) return Pipeline{"", "", ""};
      v += payload(json::parse(r.out)).dump() + slurp(dir / ("s_property" + std::to_string(prop) + ".csv"));
    }
    if (gen.code != 0 || ana.code != 0) return Pipeline{"", "", ""};
    p.graph = slurp(file) + payload(json::parse(slurp(file + ".json"))).dump();
    p.analyze = payload(json::parse(ana.out)).dump();
    p.verify = v;
    return p;
  };
  int identical = 0, total = 0;
  for (std::string model : {"--model cm --n 20000 --beta 2.5 --seed 5", "--model cl --n 20000 --beta 2.5 --seed 5",
                            "--model nr --n 20000 --beta 2.5 --seed 5"}) {
    auto a = pipeline("a", 1, model);
    auto b = pipeline("b", 1, model);
    auto c = pipeline("c", 4, model);
    bool ok = !a.graph.empty() && a.graph == b.graph && a.graph == c.graph && a.analyze == b.analyze &&
              a.analyze == c.analyze && a.verify == b.verify && a.verify == c.verify;
    log() << model << ": " << (ok ? "identical" : "DIFFERS") << '\n';
    identical += ok;
    ++total;
  }
  fs::remove_all(root);
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " pipelines identical across reruns and threads {1,4}"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> list = {
      {"exactness suite", exactness_suite},
      {"2-sweep accuracy", two_sweep_accuracy},
      {"sumsweep heuristic tightness", sumsweep_tightness},
      {"sampling vs 2-sweep", sampling_vs_two_sweep},
      {"rw guarantee", rw_guarantee},
      {"property suite", property_suite},
      {"asymptotic trends", asymptotic_trends},
      {"empirical constants", empirical_constants},
      {"cost scaling", cost_scaling},
      {"determinism", determinism},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= 10; ++i) ids.push_back(i);
  bool all_pass = true;
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(criteria().size())) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto& [name, fn] = criteria()[static_cast<std::size_t>(id - 1)];
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << id << ' ' << (o.pass ? "PASS" : "FAIL") << ": " << name << ": " << o.summary << " ("
              << fmt(secs, 1) << " s)" << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
