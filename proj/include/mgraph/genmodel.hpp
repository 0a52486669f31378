#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mgraph/graph.hpp"
#include "mgraph/parallel.hpp"
#include "mgraph/random.hpp"

namespace mgraph {

enum class ModelKind { CM, CL, NR };
enum class WeightMode { DeterministicQuantile, IidSample };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::CM: return "CM";
    case ModelKind::CL: return "CL";
    case ModelKind::NR: return "NR";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (s == "CM") return ModelKind::CM;
  if (s == "CL") return ModelKind::CL;
  if (s == "NR") return ModelKind::NR;
  throw Error("unknown model kind '" + s + "'");
}

inline std::string to_string(WeightMode m) {
  return m == WeightMode::DeterministicQuantile ? "deterministic-quantile" : "iid-sample";
}

inline WeightMode parse_weight_mode(const std::string& s) {
  if (s == "deterministic-quantile" || s == "quantile") return WeightMode::DeterministicQuantile;
  if (s == "iid-sample" || s == "iid") return WeightMode::IidSample;
  throw Error("unknown weight mode '" + s + "'");
}

inline void check_beta(double beta) {
  if (!(beta > 1.0)) throw Error("degree distribution undefined (beta must exceed 1)");
}

/// Recipe for one reproducible random graph.
struct ModelSpec {
  ModelKind kind = ModelKind::CM;
  std::size_t n = 0;
  double beta = 2.5;
  WeightMode weight_mode = WeightMode::DeterministicQuantile;
  std::uint64_t seed = 0;

  void validate() const {
    check_beta(beta);
    if (beta == 2.0 || beta == 3.0) throw Error("open case (beta = 2 and beta = 3 are not covered)");
    if (n < 2) throw Error("model needs n >= 2");
    if (n >= kNoVertex) throw Error("model size too large");
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Vertex weights, nonincreasing.
struct WeightSequence {
  std::vector<double> weights;
  double total_M = 0.0;

  std::size_t size() const { return weights.size(); }
};

/*
 * Power-law weights with P(w > d) ~ d^-(beta-1).
 *
 * Deterministic mode uses the quantiles w_i = (n/i)^(1/(beta-1)), i = 1..n.
 * Sampled mode draws n i.i.d. Pareto values w = U^(-1/(beta-1)) with U uniform
 * in (0,1], then sorts them. Either way weights[0] is the largest.
 */
inline WeightSequence power_law_weights(std::size_t n, double beta, WeightMode mode, std::uint64_t seed) {
  check_beta(beta);
  if (n < 2) throw Error("power_law_weights: n must be at least 2");
  WeightSequence ws;
  ws.weights.resize(n);
  const double exponent = 1.0 / (beta - 1.0);
  if (mode == WeightMode::DeterministicQuantile) {
    for (std::size_t i = 0; i < n; ++i)
      ws.weights[i] = std::pow(static_cast<double>(n) / static_cast<double>(i + 1), exponent);
  } else {
    SplitMix64 rng = SplitMix64::split(seed, 0x77e1675ULL);
    for (auto& w : ws.weights) w = std::pow(rng.uniform_open0(), -exponent);
    std::sort(ws.weights.begin(), ws.weights.end(), std::greater<>());
  }
  for (double w : ws.weights) ws.total_M += w;
  return ws;
}

/// Unsimplified generator output: the multigraph before loops and parallel
/// edges are collapsed, on all n vertices.
struct RawGraph {
  std::size_t n = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;  // CM: every matched pair; CL/NR: distinct pairs
  std::uint64_t multi_edge_count = 0;                // edges counted with multiplicity, loops included
};

struct GeneratedGraph {
  Graph graph;
  std::vector<VertexId> original_ids;  // vertex -> index into the weight sequence
  std::size_t raw_vertices = 0;
  std::size_t raw_simple_edges = 0;
  std::uint64_t multi_edge_count = 0;
};

/*
 * Half-edge counts for the configuration model: round-to-nearest with a
 * floor of 1, capped at n-1 (the largest degree a simple graph can realize),
 * and one extra half-edge on the heaviest vertex when the total is odd.
 */
inline std::vector<std::uint32_t> cm_half_edges(const WeightSequence& ws) {
  const std::size_t n = ws.size();
  std::vector<std::uint32_t> h(n);
  std::uint64_t total = 0;
  const double cap = static_cast<double>(std::max<std::size_t>(n - 1, 1));
  for (std::size_t v = 0; v < n; ++v) {
    double r = std::round(std::min(ws.weights[v], cap));
    h[v] = static_cast<std::uint32_t>(std::max(1.0, r));
    total += h[v];
  }
  if (total % 2 == 1) {
    std::size_t heaviest = static_cast<std::size_t>(std::max_element(ws.weights.begin(), ws.weights.end()) - ws.weights.begin());
    ++h[heaviest];
  }
  return h;
}

/// Uniform perfect matching of the half-edges.
inline RawGraph configuration_model_raw(const WeightSequence& ws, std::uint64_t seed) {
  auto h = cm_half_edges(ws);
  std::uint64_t total = 0;
  for (auto c : h) total += c;
  std::vector<VertexId> stubs;
  stubs.reserve(total);
  for (std::size_t v = 0; v < h.size(); ++v) stubs.insert(stubs.end(), h[v], static_cast<VertexId>(v));
  SplitMix64 rng = SplitMix64::split(seed, 0xc0f1ULL);
  for (std::size_t i = stubs.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(stubs[i - 1], stubs[j]);
  }
  RawGraph raw;
  raw.n = ws.size();
  raw.edges.resize(stubs.size() / 2);
  for (std::size_t e = 0; e < raw.edges.size(); ++e) raw.edges[e] = {stubs[2 * e], stubs[2 * e + 1]};
  raw.multi_edge_count = raw.edges.size();
  return raw;
}

namespace detail {

inline std::uint64_t zero_truncated_poisson(double lambda, SplitMix64& rng) {
  if (lambda > 1.0) {
    std::poisson_distribution<std::uint64_t> dist(lambda);
    std::uint64_t k = 0;
    while (k == 0) k = dist(rng);
    return k;
  }
  double u = rng.uniform() * -std::expm1(-lambda);
  double p = lambda * std::exp(-lambda);
  std::uint64_t k = 1;
  while (u > p && p > 0.0) {
    u -= p;
    ++k;
    p *= lambda / static_cast<double>(k);
  }
  return k;
}

/*
 * Independent-edge rank-1 model with P(edge uv) = prob(w_u w_v / M), prob
 * nondecreasing. Rows u are sampled with geometric skips over the sorted
 * weights (Miller & Hagberg), so expected work is O(n + m). Row u draws from
 * stream u, and rows are concatenated in order.
 */
template <class Prob>
RawGraph rank_one_raw(const WeightSequence& ws, std::uint64_t seed, Prob prob, bool poisson_multiplicity) {
  const std::size_t n = ws.size();
  const auto& w = ws.weights;
  const double M = ws.total_M;
  for (std::size_t i = 1; i < n; ++i)
    if (w[i] > w[i - 1]) throw Error("rank-one generator needs nonincreasing weights");

  const std::size_t blocks = std::min<std::size_t>(n, 64);
  std::vector<std::vector<std::pair<VertexId, VertexId>>> block_edges(blocks);
  std::vector<std::uint64_t> block_multi(blocks, 0);
  parallel_for(
      blocks, [](unsigned) { return 0; },
      [&](int, std::size_t b) {
        auto& out = block_edges[b];
        std::uint64_t multi = 0;
        for (std::size_t u = n * b / blocks; u < n * (b + 1) / blocks; ++u) {
          SplitMix64 rng = SplitMix64::split(seed, u);
          SplitMix64 mult_rng = SplitMix64::split(seed ^ 0x5eedf00dULL, u);
          if (poisson_multiplicity) {
            std::poisson_distribution<std::uint64_t> loops(w[u] * w[u] / (2.0 * M));
            multi += loops(mult_rng);
          }
          std::size_t v = u + 1;
          if (v >= n) continue;
          double p = prob(w[u] * w[v] / M);
          while (v < n && p > 0.0) {
            if (p < 1.0) {
              double skip = std::floor(std::log(rng.uniform_open0()) / std::log1p(-p));
              if (skip >= static_cast<double>(n - v)) break;
              v += static_cast<std::size_t>(skip);
            }
            double lambda = w[u] * w[v] / M;
            double q = prob(lambda);
            if (rng.uniform() < q / p) {
              out.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
              multi += poisson_multiplicity ? zero_truncated_poisson(lambda, mult_rng) : 1;
            }
            p = q;
            ++v;
          }
        }
        block_multi[b] = multi;
      });

  RawGraph raw;
  raw.n = n;
  std::size_t total = 0;
  for (auto& be : block_edges) total += be.size();
  raw.edges.reserve(total);
  for (std::size_t b = 0; b < blocks; ++b) {
    raw.edges.insert(raw.edges.end(), block_edges[b].begin(), block_edges[b].end());
    raw.multi_edge_count += block_multi[b];
  }
  return raw;
}

}  // namespace detail

/// Chung-Lu: each pair independently with probability min(1, w_u w_v / M).
inline RawGraph chung_lu_raw(const WeightSequence& ws, std::uint64_t seed) {
  return detail::rank_one_raw(ws, seed, [](double x) { return std::min(1.0, x); }, false);
}

/*
 * Norros-Reittu: Poisson(w_u w_v / M) parallel edges per pair. The simple
 * graph only sees whether the count is positive, so pairs are sampled with
 * probability 1 - exp(-w_u w_v / M); the multiplicity of each present pair is
 * then drawn from the zero-truncated Poisson law, and self-loops from
 * Poisson(w_u^2 / 2M), to report the multigraph edge count.
 */
inline RawGraph norros_reittu_raw(const WeightSequence& ws, std::uint64_t seed) {
  return detail::rank_one_raw(ws, seed, [](double x) { return -std::expm1(-x); }, true);
}

struct GenerateOptions {
  bool giant_only = true;
};

inline GeneratedGraph finalize(const RawGraph& raw, const GenerateOptions& opts) {
  GeneratedGraph out;
  out.raw_vertices = raw.n;
  out.multi_edge_count = raw.multi_edge_count;
  Graph simple = make_simple_graph(raw.n, raw.edges);
  out.raw_simple_edges = simple.num_edges();
  if (opts.giant_only) {
    Subgraph giant = giant_component(simple);
    out.graph = std::move(giant.graph);
    out.original_ids = std::move(giant.new_to_old);
  } else {
    out.original_ids.resize(raw.n);
    for (std::size_t v = 0; v < raw.n; ++v) out.original_ids[v] = static_cast<VertexId>(v);
    out.graph = std::move(simple);
  }
  return out;
}

inline GeneratedGraph gen_configuration_model(const WeightSequence& ws, std::uint64_t seed, const GenerateOptions& opts = {}) {
  return finalize(configuration_model_raw(ws, seed), opts);
}

inline GeneratedGraph gen_chung_lu(const WeightSequence& ws, std::uint64_t seed, const GenerateOptions& opts = {}) {
  return finalize(chung_lu_raw(ws, seed), opts);
}

inline GeneratedGraph gen_norros_reittu(const WeightSequence& ws, std::uint64_t seed, const GenerateOptions& opts = {}) {
  return finalize(norros_reittu_raw(ws, seed), opts);
}

/// Weights and edges both derive from spec.seed, on separate streams.
inline GeneratedGraph generate(const ModelSpec& spec, const GenerateOptions& opts = {}) {
  spec.validate();
  WeightSequence ws = power_law_weights(spec.n, spec.beta, spec.weight_mode, spec.seed);
  switch (spec.kind) {
    case ModelKind::CM: return gen_configuration_model(ws, spec.seed, opts);
    case ModelKind::CL: return gen_chung_lu(ws, spec.seed, opts);
    case ModelKind::NR: return gen_norros_reittu(ws, spec.seed, opts);
  }
  throw Error("unknown model kind");
}

}  // namespace mgraph
