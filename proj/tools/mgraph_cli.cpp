// mgraph command-line driver.
//
// Exit codes: 0 success, 1 internal failure, 2 usage or parameter error.
// Reports go to stdout as JSON; CSV series go to files under --out-prefix.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgraph/edge_list.hpp"
#include "mgraph/mgraph.hpp"
#include "mgraph/serialization.hpp"

using namespace mgraph;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphSource {
  std::string input;
  std::string model;
  std::size_t n = 0;
  double beta = 0.0;
  std::string weight_mode = "quantile";
  std::uint64_t seed = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--input", input, "Edge-list file (analyses use its giant component)");
    cmd->add_option("--model", model, "Generate in memory instead: cm, cl or nr");
    cmd->add_option("--n", n, "Number of vertices for --model");
    cmd->add_option("--beta", beta, "Power-law exponent for --model");
    cmd->add_option("--weight-mode", weight_mode, "quantile or iid");
    cmd->add_option("--seed", seed, "Seed for generation and sampling");
  }

  ModelSpec spec() const {
    ModelSpec s;
    s.kind = parse_model_kind(model);
    s.n = n;
    s.beta = beta;
    s.weight_mode = parse_weight_mode(weight_mode);
    s.seed = seed;
    return s;
  }

  json describe() const {
    if (!input.empty()) return json{{"input", input}};
    return json{{"model", spec()}};
  }
};

struct LoadedGraph {
  Graph graph;
  std::size_t input_vertices = 0;
  std::optional<double> beta;
};

LoadedGraph load(const GraphSource& src) {
  if (src.input.empty() == src.model.empty()) throw UsageError("give exactly one of --input or --model");
  LoadedGraph out;
  if (!src.input.empty()) {
    auto r = load_edge_list(src.input);
    out.input_vertices = r.graph.num_vertices();
    out.graph = giant_component(r.graph).graph;
  } else {
    auto spec = src.spec();
    auto g = generate(spec);
    out.input_vertices = g.raw_vertices;
    out.graph = std::move(g.graph);
    out.beta = spec.beta;
  }
  if (src.beta > 0) out.beta = src.beta;
  return out;
}

json graph_summary(const LoadedGraph& lg) {
  return json{{"input_vertices", lg.input_vertices},
              {"vertices", lg.graph.num_vertices()},
              {"edges", lg.graph.num_edges()}};
}

json degree_histogram(const Graph& g) {
  std::map<std::size_t, std::size_t> h;
  for (VertexId v = 0; v < g.num_vertices(); ++v) ++h[g.degree(v)];
  json j = json::object();
  for (auto [d, c] : h) j[std::to_string(d)] = c;
  return j;
}

void write_text(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  body(out);
  if (!out) throw Error("write to '" + path + "' failed");
}

struct Context {
  std::vector<std::string> argv;
  unsigned threads = 0;

  json report(const std::string& subcommand) const {
    json cfg{{"subcommand", subcommand}, {"argv", argv}, {"threads", thread_count()}};
    return json{{"tool", "mgraph"}, {"version", kVersion}, {"config", cfg}};
  }
};

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int cmd_generate(const Context& ctx, const GraphSource& src, const std::string& out, bool raw) {
  if (src.model.empty()) throw UsageError("generate needs --model");
  auto spec = src.spec();
  auto g = generate(spec, {.giant_only = !raw});
  json j = ctx.report("generate");
  j["spec"] = spec;
  j["raw_vertices"] = g.raw_vertices;
  j["raw_simple_edges"] = g.raw_simple_edges;
  j["multi_edge_count"] = g.multi_edge_count;
  j["giant_only"] = !raw;
  j["vertices"] = g.graph.num_vertices();
  j["edges"] = g.graph.num_edges();
  j["degree_histogram"] = degree_histogram(g.graph);
  if (!out.empty()) {
    write_text(out, [&](std::ostream& os) { save_edge_list(g.graph, os); });
    write_text(out + ".json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    j["output"] = out;
  }
  print(j);
  return 0;
}

struct AnalyzeParams {
  std::string algo = "all";
  std::optional<std::size_t> k;
  std::optional<VertexId> start;
  std::size_t initial_k = 10;
  std::size_t hub_period = 5;
};

int cmd_analyze(const Context& ctx, const GraphSource& src, const AnalyzeParams& p) {
  static const std::vector<std::string> known = {"sample", "two_sweep", "rw", "sumsweep", "ifub", "exact_sumsweep", "topk", "all"};
  if (std::find(known.begin(), known.end(), p.algo) == known.end()) throw UsageError("unknown algorithm '" + p.algo + "'");
  auto lg = load(src);
  const Graph& g = lg.graph;
  const std::size_t n = g.num_vertices();
  const std::uint64_t seed = src.seed;
  json j = ctx.report("analyze");
  j["source"] = src.describe();
  j["graph"] = graph_summary(lg);
  json results = json::array();
  auto want = [&](const char* name) { return p.algo == "all" || p.algo == name; };

  std::optional<Distance> exact_d, ifub_d;
  if (want("sample")) {
    std::size_t k = p.k.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 0.3)))));
    results.push_back(sample_lower_bound(g, std::min(k, n), seed));
  }
  if (want("two_sweep")) results.push_back(two_sweep(g, p.start, seed));
  if (want("rw")) results.push_back(rw_approx(g, seed));
  if (want("sumsweep")) results.push_back(sumsweep_heuristic(g, p.k.value_or(10), seed).result);
  if (want("ifub")) {
    auto r = ifub(g, p.start);
    exact_d = ifub_d = r.value;
    results.push_back(r);
  }
  std::optional<ExactSumSweepResult> ess;
  if (want("exact_sumsweep")) {
    ess = exact_sumsweep(g, {p.initial_k, p.hub_period, seed});
    results.push_back(ess->diameter);
    results.push_back(ess->radius);
    exact_d = ess->diameter.value;
  }
  j["results"] = results;
  if (want("topk")) j["topk"] = bcm_topk(g, std::min<std::size_t>(p.k.value_or(10), n));

  if (p.algo == "all") {
    // One row per Table-1 style entry: value, searches, absolute error.
    static const std::map<std::string, std::string> rows = {
        {"sample_lower_bound", "Lower bound (sampling)"}, {"two_sweep", "2-Sweep"},
        {"rw", "RW"},                                     {"sumsweep_heuristic", "SumSweep heuristic"},
        {"ifub", "iFub"},                                 {"exact_sumsweep_diameter", "ExactSumSweep (diameter)"},
        {"exact_sumsweep_radius", "ExactSumSweep (radius)"}};
    json table = json::array();
    for (const auto& r : results) {
      std::string algo = r["algo"];
      json row{{"row", rows.count(algo) ? rows.at(algo) : algo}, {"algo", algo}, {"value", r["value"]}, {"bfs_count", r["bfs_count"]}};
      if (algo != "exact_sumsweep_radius") row["abs_error"] = static_cast<long long>(*exact_d) - r["value"].get<long long>();
      table.push_back(row);
    }
    j["table"] = table;
    j["exact_agree"] = ess && ifub_d && ess->diameter.value == *ifub_d;
  }
  print(j);
  return 0;
}

struct VerifyParams {
  int property = 0;
  double x = 0.5, y = 0.6, eps = 0.2;
  std::size_t pairs = 10000, targets = 10000;
  double z_res = 0.05, tolerance = -1.0;
  std::string out_prefix;
};

int cmd_verify(const Context& ctx, const GraphSource& src, VerifyParams p) {
  auto lg = load(src);
  const Graph& g = lg.graph;
  PropertyReport rep;
  switch (p.property) {
    case 1:
      rep = verify_dev(g, p.x, p.eps);
      break;
    case 2:
      rep = verify_touch(g, p.x, p.y, p.pairs, src.seed);
      break;
    case 3: {
      UntouchOptions opt;
      if (p.tolerance >= 0) opt.tolerance = p.tolerance;
      rep = verify_untouch(g, p.targets, p.z_res, src.seed, opt);
      break;
    }
    case 4:
      if (!lg.beta) throw UsageError("property 4 needs --beta");
      rep = p.tolerance >= 0 ? verify_degree(g, *lg.beta, p.tolerance) : verify_degree(g, *lg.beta);
      break;
    default:
      throw UsageError("property must be 1, 2, 3 or 4");
  }
  json j = ctx.report("verify");
  j["source"] = src.describe();
  j["graph"] = graph_summary(lg);
  j["report"] = rep;
  if (!p.out_prefix.empty()) {
    std::string path = p.out_prefix + "property" + std::to_string(p.property) + ".csv";
    write_text(path, [&](std::ostream& os) { rep.write_csv(os); });
    j["series_csv"] = path;
  }
  print(j);
  return 0;
}

int cmd_predict(const Context& ctx, double beta, std::size_t n) {
  json j = ctx.report("predict");
  j["prediction"] = predict(beta, n);
  print(j);
  return 0;
}

int cmd_stats(const Context& ctx, const GraphSource& src, std::size_t sample, std::vector<double> tau_x,
              const std::string& out_prefix) {
  auto lg = load(src);
  const Graph& g = lg.graph;
  const std::size_t n = g.num_vertices();
  json j = ctx.report("stats");
  j["source"] = src.describe();
  j["graph"] = graph_summary(lg);
  std::size_t maxdeg = 0;
  for (VertexId v = 0; v < n; ++v) maxdeg = std::max(maxdeg, g.degree(v));
  j["max_degree"] = maxdeg;
  j["mean_degree"] = n ? 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(n) : 0.0;
  j["degree_histogram"] = degree_histogram(g);
  if (n >= 2) {
    auto avg = average_distance(g, sample ? std::min(sample, n) : default_average_distance_sample(n), src.seed);
    auto ess = exact_sumsweep(g, {.seed = src.seed});
    j["average_distance"] = json{{"mean", avg.mean}, {"std_error", avg.std_error}, {"sample_size", avg.sample_size}};
    j["diameter"] = ess.diameter.value;
    j["radius"] = ess.radius.value;
    double D = ess.diameter.value;
    j["C"] = D > avg.mean ? json(constant_C(avg.mean, D)) : json(nullptr);
  }
  if (!tau_x.empty()) {
    auto table = tau_table(g, tau_x);
    if (!out_prefix.empty()) {
      std::string path = out_prefix + "tau.csv";
      write_text(path, [&](std::ostream& os) { table.write_csv(os); });
      j["tau_csv"] = path;
    }
    json fits = json::object();
    for (double x : tau_x) {
      try {
        auto fit = estimate_c_tail(table, x);
        fits[std::to_string(x)] = json{{"c", fit.c}, {"residual", fit.residual}};
      } catch (const Error& e) {
        fits[std::to_string(x)] = json{{"error", e.what()}};
      }
    }
    j["c_tail"] = fits;
  }
  print(j);
  return 0;
}

int cmd_oracle_build(const Context& ctx, const GraphSource& src, const std::string& labels_path) {
  auto lg = load(src);
  auto labels = build_labels(lg.graph);
  labels.save(labels_path);
  json j = ctx.report("oracle build");
  j["source"] = src.describe();
  j["graph"] = graph_summary(lg);
  j["labels"] = labels_path;
  j["stats"] = labels.stats();
  print(j);
  return 0;
}

int cmd_oracle_query(const Context& ctx, const std::string& labels_path, VertexId s, VertexId t) {
  auto labels = HubLabeling::load(labels_path);
  Distance d = labels.query(s, t);
  json j = ctx.report("oracle query");
  j["s"] = s;
  j["t"] = t;
  j["distance"] = d == kUnreached ? json(nullptr) : json(d);
  print(j);
  return 0;
}

int cmd_oracle_stats(const Context& ctx, const std::string& labels_path) {
  auto labels = HubLabeling::load(labels_path);
  json j = ctx.report("oracle stats");
  j["labels"] = labels_path;
  j["stats"] = labels.stats();
  print(j);
  return 0;
}

int run(std::vector<std::string> args);

int cmd_replay(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw UsageError("cannot open report '" + report_path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("config") || !j["config"].contains("argv"))
    throw UsageError("'" + report_path + "' has no embedded run configuration");
  return run(j["config"]["argv"].get<std::vector<std::string>>());
}

int run(std::vector<std::string> args) {
  CLI::App app{"Distance analysis of power-law random graphs", "mgraph"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Context ctx;
  ctx.argv = args;
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: MGRAPH_THREADS, then all cores)");

  GraphSource src;

  auto* gen = app.add_subcommand("generate", "Generate a model graph and write it as an edge list");
  std::string gen_out;
  bool gen_raw = false;
  src.add_to(gen);
  gen->add_option("--out", gen_out, "Edge-list path; a JSON sidecar goes to <out>.json");
  gen->add_flag("--raw", gen_raw, "Keep every vertex instead of only the giant component");

  auto* ana = app.add_subcommand("analyze", "Run diameter, radius and closeness algorithms");
  AnalyzeParams ap;
  src.add_to(ana);
  ana->add_option("--algo", ap.algo, "sample, two_sweep, rw, sumsweep, ifub, exact_sumsweep, topk or all");
  ana->add_option("--k", ap.k, "Sources for sample, rounds for sumsweep, k for topk");
  ana->add_option("--start", ap.start, "Start vertex for two_sweep and ifub");
  ana->add_option("--initial-k", ap.initial_k, "Heuristic rounds before exact_sumsweep refinement");
  ana->add_option("--hub-period", ap.hub_period, "exact_sumsweep: every n-th search starts at a hub");

  auto* ver = app.add_subcommand("verify", "Check one of the four distance properties");
  VerifyParams vp;
  src.add_to(ver);
  ver->add_option("--property", vp.property, "1 (deviation), 2 (touch), 3 (untouch) or 4 (degree)")->required()->check(CLI::Range(1, 4));
  ver->add_option("--x", vp.x, "Exponent x");
  ver->add_option("--y", vp.y, "Exponent y (property 2)");
  ver->add_option("--eps", vp.eps, "Degree cut n^eps (property 1)");
  ver->add_option("--pairs", vp.pairs, "Sampled pairs (property 2)");
  ver->add_option("--targets", vp.targets, "Sampled targets (property 3)");
  ver->add_option("--z-res", vp.z_res, "Grid step for property 3");
  ver->add_option("--tolerance", vp.tolerance, "Override the pass tolerance (properties 3 and 4)");
  ver->add_option("--out-prefix", vp.out_prefix, "Write the plot series to <prefix>property<id>.csv");

  auto* pre = app.add_subcommand("predict", "Theoretical predictions for a power-law exponent");
  double pbeta = 0;
  std::size_t pn = 100000;
  pre->add_option("--beta", pbeta, "Power-law exponent")->required();
  pre->add_option("--n", pn, "Graph size");

  auto* sta = app.add_subcommand("stats", "Degree and distance summary of a graph");
  std::size_t st_sample = 0;
  std::vector<double> tau_x;
  std::string st_prefix;
  src.add_to(sta);
  sta->add_option("--sample", st_sample, "Sources for the average distance (default min(n, 1000))");
  sta->add_option("--tau-x", tau_x, "Exponents for a tau table and tail fits");
  sta->add_option("--out-prefix", st_prefix, "Write the tau table to <prefix>tau.csv");

  auto* ora = app.add_subcommand("oracle", "Build and query exact distance labels");
  ora->require_subcommand(1);
  std::string labels_path;
  auto* ob = ora->add_subcommand("build", "Build labels for a graph");
  src.add_to(ob);
  ob->add_option("--labels", labels_path, "Output label file")->required();
  auto* oq = ora->add_subcommand("query", "Distance between two vertices");
  VertexId qs = 0, qt = 0;
  oq->add_option("--labels", labels_path, "Label file")->required();
  oq->add_option("s", qs, "Source vertex")->required();
  oq->add_option("t", qt, "Target vertex")->required();
  auto* os = ora->add_subcommand("stats", "Label size statistics");
  os->add_option("--labels", labels_path, "Label file")->required();

  auto* rep = app.add_subcommand("replay", "Re-run the configuration embedded in a report");
  std::string replay_path;
  rep->add_option("report", replay_path, "Report JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (threads > 0) set_thread_count(threads);
  try {
    if (*gen) return cmd_generate(ctx, src, gen_out, gen_raw);
    if (*ana) return cmd_analyze(ctx, src, ap);
    if (*ver) return cmd_verify(ctx, src, vp);
    if (*pre) return cmd_predict(ctx, pbeta, pn);
    if (*sta) return cmd_stats(ctx, src, st_sample, tau_x, st_prefix);
    if (*ob) return cmd_oracle_build(ctx, src, labels_path);
    if (*oq) return cmd_oracle_query(ctx, labels_path, qs, qt);
    if (*os) return cmd_oracle_stats(ctx, labels_path);
    if (*rep) return cmd_replay(replay_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
