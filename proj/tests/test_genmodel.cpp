#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "mgraph/genmodel.hpp"
#include "mgraph/parallel.hpp"
#include "test_support.hpp"

using namespace mgraph;

namespace {

WeightSequence manual_weights(std::vector<double> w) {
  WeightSequence ws;
  ws.weights = std::move(w);
  for (double x : ws.weights) ws.total_M += x;
  return ws;
}

/// Degree of each vertex in the raw multigraph, loops counting twice.
std::vector<std::uint64_t> raw_degrees(const RawGraph& raw) {
  std::vector<std::uint64_t> d(raw.n, 0);
  for (auto [u, v] : raw.edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
    sxy += (std::log(x) - mx) * (std::log(y) - my);
  }
  return sxy / sxx;
}

/// P(X <= k) for X ~ Poisson(lambda), summed in log space.
double poisson_cdf(double lambda, double k) {
  if (k < 0) return 0.0;
  double acc = 0.0;
  if (lambda < 600) {
    double pmf = std::exp(-lambda);
    for (int j = 0; j <= static_cast<int>(k); ++j) {
      acc += pmf;
      pmf *= lambda / (j + 1);
    }
  } else {
    for (int j = 0; j <= static_cast<int>(k); ++j) acc += std::exp(-lambda + j * std::log(lambda) - std::lgamma(j + 1.0));
  }
  return std::min(acc, 1.0);
}

std::size_t count_above(const std::vector<double>& v, double d) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double x) { return x > d; }));
}

}  // namespace

TEST(Weights, QuantileFormula) {
  auto ws = power_law_weights(4, 2.0, WeightMode::DeterministicQuantile, 0);
  ASSERT_EQ(ws.size(), 4u);
  EXPECT_DOUBLE_EQ(ws.weights[0], 4.0);
  EXPECT_DOUBLE_EQ(ws.weights[1], 2.0);
  EXPECT_NEAR(ws.weights[2], 4.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(ws.weights[3], 1.0);
  EXPECT_NEAR(ws.total_M, 4 + 2 + 4.0 / 3.0 + 1, 1e-12);

  auto w10 = power_law_weights(10, 3.0, WeightMode::DeterministicQuantile, 0);
  EXPECT_NEAR(w10.weights[0], 3.1623, 1e-4);
}

TEST(Weights, BetaAtMostOneIsRejected) {
  try {
    power_law_weights(10, 1.0, WeightMode::DeterministicQuantile, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("degree distribution undefined"), std::string::npos);
  }
}

TEST(Weights, TailSlopeAndConstantFactor) {
  const std::size_t n = 100000;
  auto ws = power_law_weights(n, 2.5, WeightMode::DeterministicQuantile, 0);
  EXPECT_TRUE(std::is_sorted(ws.weights.rbegin(), ws.weights.rend()));
  std::vector<std::pair<double, double>> pts;
  for (double d = 2.0; d < ws.weights[0] / 4; d *= 1.5) {
    double c = static_cast<double>(count_above(ws.weights, d));
    pts.emplace_back(d, c);
    double ratio = c / (static_cast<double>(n) / std::pow(d, 1.5));
    EXPECT_GT(ratio, 0.25);
    EXPECT_LT(ratio, 4.0);
  }
  EXPECT_NEAR(loglog_slope(pts), -1.5, 0.1);
}

TEST(Weights, IidModeIsSeededParetoSample) {
  auto a = power_law_weights(50000, 2.5, WeightMode::IidSample, 5);
  auto b = power_law_weights(50000, 2.5, WeightMode::IidSample, 5);
  auto c = power_law_weights(50000, 2.5, WeightMode::IidSample, 6);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_NE(a.weights, c.weights);
  EXPECT_TRUE(std::is_sorted(a.weights.rbegin(), a.weights.rend()));
  EXPECT_GE(a.weights.back(), 1.0);
  for (double d : {2.0, 4.0, 8.0}) {
    double frac = static_cast<double>(count_above(a.weights, d)) / 50000.0;
    EXPECT_NEAR(frac, std::pow(d, -1.5), 0.01);
  }
}

TEST(ConfigurationModel, TwoUnitWeightsGiveOneEdge) {
  auto g = gen_configuration_model(manual_weights({1, 1}), 3);
  EXPECT_EQ(g.graph.num_vertices(), 2u);
  EXPECT_EQ(g.graph.num_edges(), 1u);
  EXPECT_TRUE(g.graph.has_edge(0, 1));
}

TEST(ConfigurationModel, DegreeSequencePreservedBeforeCollapse) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto raw = configuration_model_raw(manual_weights({3, 1, 1, 1}), seed);
    EXPECT_EQ(raw_degrees(raw), (std::vector<std::uint64_t>{3, 1, 1, 1}));
  }
}

TEST(ConfigurationModel, HalfEdgesMatchRoundedWeights) {
  auto ws = power_law_weights(1000, 2.5, WeightMode::DeterministicQuantile, 42);
  // Independent recomputation of the assignment rule.
  std::vector<std::uint64_t> expect(1000);
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < 1000; ++v) {
    double w = std::min(ws.weights[v], 999.0);
    expect[v] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(w)));
    total += expect[v];
  }
  if (total % 2) ++expect[0];
  auto raw = configuration_model_raw(ws, 42);
  EXPECT_EQ(raw_degrees(raw), expect);
}

TEST(ConfigurationModel, HalfEdgesCappedBelowN) {
  auto ws = power_law_weights(1000, 1.5, WeightMode::DeterministicQuantile, 0);
  auto h = cm_half_edges(ws);
  EXPECT_LE(h[1], 999u);
  EXPECT_LE(h[0], 1000u);  // parity fix may add one
}

TEST(ChungLu, UnitPairProbabilityHalf) {
  auto ws = manual_weights({1, 1});
  int hits = 0;
  const int trials = 20000;
  for (int s = 0; s < trials; ++s) hits += chung_lu_raw(ws, static_cast<std::uint64_t>(s)).edges.size() == 1;
  EXPECT_NEAR(hits / static_cast<double>(trials), 0.5, 0.015);
}

TEST(ChungLu, ProbabilityCappedAtOne) {
  auto ws = manual_weights({100, 2, 2, 2, 2, 2});
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto g = gen_chung_lu(ws, s, {.giant_only = false});
    EXPECT_EQ(g.graph.degree(0), 5u);
  }
}

TEST(ChungLu, ClassMeanDegreeTracksWeight) {
  auto ws = power_law_weights(100000, 2.5, WeightMode::DeterministicQuantile, 7);
  auto g = gen_chung_lu(ws, 7, {.giant_only = false});
  double wsum = 0, dsum = 0;
  std::size_t cnt = 0;
  for (VertexId v = 0; v < ws.size(); ++v)
    if (ws.weights[v] >= 8 && ws.weights[v] < 16) {
      wsum += ws.weights[v];
      dsum += static_cast<double>(g.graph.degree(v));
      ++cnt;
    }
  ASSERT_GT(cnt, 100u);
  EXPECT_NEAR(dsum / wsum, 1.0, 0.15);
}

TEST(NorrosReittu, UnitPairNoEdgeMass) {
  auto ws = manual_weights({1, 1});
  int empty = 0;
  const int trials = 20000;
  for (int s = 0; s < trials; ++s) empty += norros_reittu_raw(ws, static_cast<std::uint64_t>(s)).edges.empty();
  EXPECT_NEAR(empty / static_cast<double>(trials), std::exp(-0.5), 0.015);
}

TEST(NorrosReittu, ExpectedMultiEdgeCountIsHalfM) {
  auto ws = power_law_weights(1000, 2.5, WeightMode::DeterministicQuantile, 0);
  double total = 0;
  for (std::uint64_t s = 0; s < 100; ++s) total += static_cast<double>(norros_reittu_raw(ws, s).multi_edge_count);
  EXPECT_NEAR(total / 100.0 / (ws.total_M / 2.0), 1.0, 0.05);
}

TEST(NorrosReittu, MaxWeightVertexDegreeConcentrates) {
  auto ws = power_law_weights(100000, 3.5, WeightMode::DeterministicQuantile, 3);
  auto g = gen_norros_reittu(ws, 3, {.giant_only = false});
  const double w1 = ws.weights[0];
  EXPECT_NEAR(static_cast<double>(g.graph.degree(0)), w1, 3.0 * std::sqrt(w1));
}

TEST(RankOne, DegreeConcentrationForHeavyVertices) {
  // Degrees are close to Poisson(w_v), so a few percent of vertices just above
  // the cut legitimately land outside [w/2, 2w]. Compare against that count.
  auto ws = power_law_weights(100000, 2.5, WeightMode::DeterministicQuantile, 11);
  const double cut = std::pow(100000.0, 0.2);
  double expected_bad = 0;
  for (double w : ws.weights)
    if (w > cut) expected_bad += poisson_cdf(w, std::ceil(w / 2) - 1) + 1.0 - poisson_cdf(w, std::floor(2 * w));
  for (auto kind : {ModelKind::CL, ModelKind::NR}) {
    auto g = kind == ModelKind::CL ? gen_chung_lu(ws, 11, {.giant_only = false}) : gen_norros_reittu(ws, 11, {.giant_only = false});
    std::size_t heavy = 0, good = 0;
    for (VertexId v = 0; v < ws.size(); ++v) {
      if (ws.weights[v] <= cut) continue;
      ++heavy;
      double d = static_cast<double>(g.graph.degree(v));
      if (d >= ws.weights[v] / 2 && d <= 2 * ws.weights[v]) ++good;
    }
    const double bad = static_cast<double>(heavy - good);
    EXPECT_LE(bad, expected_bad + 4.0 * std::sqrt(expected_bad)) << to_string(kind);
    EXPECT_GE(static_cast<double>(good), 0.97 * static_cast<double>(heavy)) << to_string(kind);
  }
}

TEST(Generate, TailSlopeOfOutputs) {
  for (double beta : {2.5, 3.5})
    for (auto kind : {ModelKind::CM, ModelKind::CL, ModelKind::NR}) {
      auto g = generate({kind, 100000, beta, WeightMode::DeterministicQuantile, 1});
      std::vector<double> deg;
      for (VertexId v = 0; v < g.graph.num_vertices(); ++v) deg.push_back(static_cast<double>(g.graph.degree(v)));
      double hi = std::pow(100000.0, 1.0 / (beta - 1.0)) / 4.0;
      std::vector<std::pair<double, double>> pts;
      for (double d = 4; d <= hi; d *= 1.3) {
        auto c = count_above(deg, d);
        if (c > 0) pts.emplace_back(d, static_cast<double>(c));
      }
      ASSERT_GE(pts.size(), 2u);
      if (kind == ModelKind::CM) {
        EXPECT_NEAR(loglog_slope(pts), -std::max(1.0, beta - 1.0), 0.3) << "beta " << beta;
        continue;
      }
      // Rank-one degrees are mixed Poisson, which bends the tail at small d.
      auto ws = power_law_weights(100000, beta, WeightMode::DeterministicQuantile, 1);
      std::vector<std::pair<double, double>> mixed;
      for (auto [d, c] : pts) {
        double e = 0;
        for (double w : ws.weights) e += 1.0 - poisson_cdf(w, std::floor(d));
        mixed.emplace_back(d, e);
      }
      EXPECT_NEAR(loglog_slope(pts), loglog_slope(mixed), 0.15) << to_string(kind) << " beta " << beta;
    }
}

TEST(Generate, GiantOnlyAndRawFlag) {
  ModelSpec spec{ModelKind::CM, 5000, 3.5, WeightMode::DeterministicQuantile, 2};
  auto giant = generate(spec);
  auto raw = generate(spec, {.giant_only = false});
  EXPECT_TRUE(is_connected(giant.graph));
  EXPECT_EQ(raw.graph.num_vertices(), 5000u);
  EXPECT_LT(giant.graph.num_vertices(), raw.graph.num_vertices());
  EXPECT_EQ(giant.original_ids.size(), giant.graph.num_vertices());
}

TEST(Generate, DeterministicAcrossRunsAndThreads) {
  for (auto kind : {ModelKind::CM, ModelKind::CL, ModelKind::NR}) {
    ModelSpec spec{kind, 20000, 2.5, WeightMode::DeterministicQuantile, 99};
    GeneratedGraph a, b;
    {
      ScopedThreadCount one(1);
      a = generate(spec);
    }
    {
      ScopedThreadCount four(4);
      b = generate(spec);
    }
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.original_ids, b.original_ids);
    EXPECT_EQ(a.multi_edge_count, b.multi_edge_count);
    spec.seed = 100;
    EXPECT_NE(generate(spec).graph, a.graph);
  }
}

TEST(ModelSpec, Validation) {
  ModelSpec s{ModelKind::CL, 100, 2.0, WeightMode::DeterministicQuantile, 1};
  EXPECT_THROW(s.validate(), Error);
  s.beta = 3.0;
  EXPECT_THROW(s.validate(), Error);
  s.beta = 0.9;
  EXPECT_THROW(s.validate(), Error);
  s.beta = 2.5;
  s.n = 1;
  EXPECT_THROW(s.validate(), Error);
  s.n = 2;
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(parse_model_kind("cm"), ModelKind::CM);
  EXPECT_THROW(parse_model_kind("ba"), Error);
}
