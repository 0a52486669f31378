#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mgraph/random.hpp"
#include "mgraph/theory.hpp"

using namespace mgraph;

namespace {

DiscreteDistribution dist(std::map<std::size_t, double> m) { return DiscreteDistribution::from_map(m); }

/// Least root of f(s) = s by bisection on f(s) - s over [0, 1 - tiny], a
/// reference independent of the fixed-point iteration.
double bisect_extinction(const DiscreteDistribution& mu) {
  auto h = [&](double s) { return mu.pgf(s) - s; };
  // h(0) = mu(0) >= 0; search for the first sign change on a fine grid.
  double prev = 0.0;
  if (h(0.0) == 0.0) return 0.0;
  for (int i = 1; i <= 100000; ++i) {
    double s = i / 100000.0;
    if (h(s) <= 0.0) {
      double lo = prev, hi = s;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (h(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = s;
  }
  return 1.0;
}

/*
 * Monte Carlo of the pruned process: a root with offspring drawn from mu,
 * each child surviving (having an infinite line of descent) independently
 * with probability 1 - q. Conditioned on the root surviving, the number of
 * surviving children follows eta.
 */
std::vector<double> simulate_eta(const DiscreteDistribution& mu, double q, std::size_t trials, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::discrete_distribution<std::size_t> offspring(mu.p.begin(), mu.p.end());
  std::vector<double> counts(mu.p.size(), 0.0);
  std::size_t kept = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t k = offspring(rng), alive = 0;
    for (std::size_t c = 0; c < k; ++c) alive += rng.uniform() >= q;
    if (alive == 0) continue;
    ++counts[alive];
    ++kept;
  }
  for (auto& c : counts) c /= static_cast<double>(kept);
  return counts;
}

}  // namespace

TEST(Residual, Examples) {
  auto mu = residual_distribution(dist({{1, 0.5}, {3, 0.5}}));
  EXPECT_NEAR(mu[0], 0.25, 1e-12);
  EXPECT_NEAR(mu[2], 0.75, 1e-12);
  EXPECT_NEAR(mu.total(), 1.0, 1e-12);
  auto leaves = residual_distribution(dist({{1, 1.0}}));
  EXPECT_EQ(leaves.p, (std::vector<double>{1.0}));
  auto chain = residual_distribution(dist({{2, 1.0}}));
  EXPECT_EQ(chain.p, (std::vector<double>{0.0, 1.0}));
  EXPECT_THROW(residual_distribution(dist({{0, 1.0}})), Error);
}

TEST(Extinction, Examples) {
  EXPECT_EQ(extinction_probability(dist({{0, 0.5}, {1, 0.5}})), 1.0);
  EXPECT_EQ(extinction_probability(dist({{0, 1.0}})), 1.0);
  EXPECT_EQ(extinction_probability(dist({{0, 0.5}, {2, 0.5}})), 1.0);  // critical
  EXPECT_NEAR(extinction_probability(dist({{0, 0.2}, {2, 0.8}})), 0.25, 1e-10);
  EXPECT_NEAR(extinction_probability(dist({{0, 0.25}, {2, 0.75}})), 1.0 / 3.0, 1e-10);
  EXPECT_EQ(extinction_probability(dist({{1, 1.0}})), 0.0);
  EXPECT_EQ(extinction_probability(dist({{2, 1.0}})), 0.0);
}

TEST(Extinction, AgreesWithBisection) {
  for (double beta : {2.2, 2.5, 2.8, 3.5, 4.5}) {
    auto mu = residual_distribution(lambda_from_beta(beta, 10000));
    EXPECT_NEAR(extinction_probability(mu), bisect_extinction(mu), 1e-8) << beta;
  }
}

TEST(Extinction, MonotoneUnderStochasticDominance) {
  // Moving mass from 0 to 3 dominates stochastically, so q must not increase.
  double prev = 1.0;
  for (double shift = 0.0; shift <= 0.5; shift += 0.05) {
    auto mu = dist({{0, 0.6 - shift}, {1, 0.1}, {2, 0.3}, {3, shift}});
    double q = extinction_probability(mu);
    EXPECT_LE(q, prev + 1e-12);
    prev = q;
  }
}

TEST(Eta, Examples) {
  auto eta = eta_distribution(dist({{0, 0.25}, {2, 0.75}}));
  EXPECT_NEAR(eta[0], 0.0, 1e-15);
  EXPECT_NEAR(eta[1], 0.5, 1e-10);
  EXPECT_NEAR(eta[2], 0.5, 1e-10);
  EXPECT_EQ(eta_distribution(dist({{1, 1.0}})).p, (std::vector<double>{0.0, 1.0}));
  auto two = eta_distribution(dist({{2, 1.0}}));
  EXPECT_EQ(two[1], 0.0);
  EXPECT_EQ(two[2], 1.0);
  try {
    eta_distribution(dist({{0, 0.5}, {1, 0.5}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no giant component");
  }
}

TEST(Eta, MonteCarloHandExample) {
  auto mu = dist({{0, 0.25}, {2, 0.75}});
  auto sim = simulate_eta(mu, 1.0 / 3.0, 1000000, 17);
  EXPECT_NEAR(sim[1], 0.5, 0.003);
  EXPECT_NEAR(sim[2], 0.5, 0.003);
}

TEST(Eta, MonteCarloFiveInstances) {
  const std::vector<DiscreteDistribution> family = {
      dist({{0, 0.1}, {1, 0.3}, {2, 0.4}, {3, 0.2}}),
      dist({{0, 0.3}, {3, 0.7}}),
      dist({{0, 0.2}, {1, 0.2}, {4, 0.6}}),
      dist({{1, 0.5}, {2, 0.25}, {5, 0.25}}),
      dist({{0, 0.4}, {1, 0.1}, {2, 0.1}, {6, 0.4}}),
  };
  std::uint64_t seed = 100;
  for (const auto& mu : family) {
    double q = extinction_probability(mu);
    auto eta = eta_distribution(mu);
    EXPECT_NEAR(eta.total(), 1.0, 1e-9);
    auto sim = simulate_eta(mu, q, 1000000, seed++);
    for (std::size_t j = 1; j < sim.size(); ++j) EXPECT_NEAR(sim[j], eta[j], 0.005) << "j=" << j;
  }
}

TEST(LambdaFromBeta, MatchesRoundedParetoLaw) {
  auto l = lambda_from_beta(2.5, 100000);
  l.validate();
  EXPECT_EQ(l.support_max(), static_cast<std::size_t>(std::floor(std::pow(100000.0, 1 / 1.5))));
  double norm = 1.0 - std::pow(l.support_max() + 0.5, -1.5);
  EXPECT_NEAR(l[1], (1 - std::pow(1.5, -1.5)) / norm, 1e-12);
  EXPECT_NEAR(l[2], (std::pow(1.5, -1.5) - std::pow(2.5, -1.5)) / norm, 1e-12);
}

TEST(Predict, DenseRegimeTable) {
  auto p = predict(1.5, 100000);
  for (double d : {1.0, 10.0, 316.0}) EXPECT_EQ(p.t_tilde(d, 0.5), 2.0);
  for (double d : {317.0, 1000.0}) EXPECT_EQ(p.t_tilde(d, 0.5), 1.0);
  EXPECT_EQ(p.d_avg_tilde, 3.0);
  ASSERT_TRUE(p.c_exponent);
  EXPECT_NEAR(*p.c_exponent, -1.0, 1e-12);
  EXPECT_EQ(p.diameter_pred, 2.0);
  ASSERT_TRUE(p.diameter_pred_alt);
  EXPECT_EQ(*p.diameter_pred_alt, 5.0);
  EXPECT_EQ(p.avg_dist_low, 2.0);
  EXPECT_EQ(p.avg_dist_high, 3.0);
}

TEST(Predict, UltraSmallAverageDistance) {
  auto p = predict(2.5, 100000);
  EXPECT_NEAR(p.d_avg_tilde, 2.0 * std::log(std::log(1e5)) / std::log(2.0), 1e-12);
  EXPECT_NEAR(p.d_avg_tilde, 7.05, 0.01);
  EXPECT_NEAR(p.c, p.eta1, 0.0);
  EXPECT_GT(p.eta1, 0.0);
  EXPECT_LT(p.eta1, 1.0);
  EXPECT_NEAR(p.diameter_pred, 2.0 * std::log(1e5) / -std::log(p.eta1), 1e-9);
  // d = 1 is evaluated as d = 2.
  EXPECT_EQ(p.t_tilde(1.0, 0.5), p.t_tilde(2.0, 0.5));
  ASSERT_TRUE(p.C);
  EXPECT_NEAR(*p.C, 2 * p.d_avg_tilde / (p.diameter_pred - p.d_avg_tilde), 1e-12);
}

TEST(Predict, SmallWorldUsesResidualMean) {
  const std::size_t n = 100000;
  auto lambda = lambda_from_beta(3.5, n);
  auto p = predict(3.5, n);
  double direct = (lambda.second_moment() - lambda.mean()) / lambda.mean();
  EXPECT_NEAR(p.M1_mu, direct, 1e-9);
  EXPECT_NEAR(p.d_avg_tilde, std::log(1e5) / std::log(direct), 1e-9);
  EXPECT_NEAR(p.t_tilde(2.0, 0.5), (0.5 * std::log(1e5) - std::log(2.0)) / std::log(direct), 1e-9);
  EXPECT_NEAR(p.diameter_pred, (2 / -std::log(p.eta1) + 1 / std::log(direct)) * std::log(1e5), 1e-9);
}

TEST(Predict, OpenCasesAndPurity) {
  for (double beta : {2.0, 3.0}) {
    try {
      predict(beta, 1000);
      FAIL();
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("open case"), std::string::npos);
    }
  }
  EXPECT_THROW(predict(1.0, 1000), Error);
  auto a = predict(3.5, 5000), b = predict(3.5, 5000);
  EXPECT_EQ(a.d_avg_tilde, b.d_avg_tilde);
  EXPECT_EQ(a.eta1, b.eta1);
  EXPECT_EQ(a.diameter_pred, b.diameter_pred);
}
