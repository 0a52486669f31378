#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgraph/graph.hpp"

namespace mgraph {

/// Probability mass function on {0, ..., K}.
struct DiscreteDistribution {
  std::vector<double> p;

  DiscreteDistribution() = default;
  explicit DiscreteDistribution(std::vector<double> probs) : p(std::move(probs)) { trim(); }

  /// Builds from sparse {value: probability} pairs.
  static DiscreteDistribution from_map(const std::map<std::size_t, double>& sparse) {
    std::vector<double> probs;
    for (auto [k, v] : sparse) {
      if (probs.size() <= k) probs.resize(k + 1, 0.0);
      probs[k] = v;
    }
    return DiscreteDistribution(std::move(probs));
  }

  std::size_t support_max() const { return p.empty() ? 0 : p.size() - 1; }
  double operator[](std::size_t k) const { return k < p.size() ? p[k] : 0.0; }

  double mean() const {
    double m = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
    return m;
  }

  double second_moment() const {
    double m = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) m += static_cast<double>(k) * static_cast<double>(k) * p[k];
    return m;
  }

  double total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
  }

  void validate() const {
    for (double v : p)
      if (!(v >= 0.0)) throw Error("distribution: negative or NaN probability");
    if (std::abs(total() - 1.0) > 1e-9) throw Error("distribution: probabilities do not sum to 1");
  }

  /// Generating function f(s) = sum p_k s^k (Horner).
  double pgf(double s) const {
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * s + p[k];
    return acc;
  }

  double pgf_derivative(double s) const {
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * p[k];
    return acc;
  }

 private:
  void trim() {
    while (!p.empty() && p.back() == 0.0) p.pop_back();
  }
};

/// Size-biased shift mu(k) = (k+1) lambda(k+1) / M1(lambda).
inline DiscreteDistribution residual_distribution(const DiscreteDistribution& lambda) {
  const double m1 = lambda.mean();
  if (!(m1 > 0.0) || !std::isfinite(m1)) throw Error("residual distribution: zero mean");
  std::vector<double> mu(lambda.p.size() - 1);
  for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = static_cast<double>(k + 1) * lambda.p[k + 1] / m1;
  return DiscreteDistribution(std::move(mu));
}

/*
 * Least root of f(s) = s in [0, 1], by iterating s <- f(s) from s = 0. The
 * iterates increase monotonically to the least fixed point. Near criticality
 * convergence is slow, so the subcritical case is answered directly.
 */
inline double extinction_probability(const DiscreteDistribution& mu, double tol = 1e-12) {
  if (mu.mean() <= 1.0 && mu[1] < 1.0) return 1.0;
  double s = 0.0;
  for (int it = 0; it < 10'000'000; ++it) {
    double next = mu.pgf(s);
    if (std::abs(next - s) < tol) return next;
    s = next;
  }
  return s;
}

/*
 * Offspring law of the branching process conditioned on survival, with the
 * dying subtrees pruned:
 *   eta(j) = 1/(1-q) * sum_{k>=j} mu(k) C(k,j) (1-q)^j q^(k-j),  j >= 1,
 * and eta(0) = 0.
 */
inline DiscreteDistribution eta_distribution(const DiscreteDistribution& mu) {
  const double q = extinction_probability(mu);
  if (q >= 1.0 - 1e-12) throw Error("no giant component");
  const std::size_t K = mu.support_max();
  std::vector<double> eta(K + 1, 0.0);
  if (q == 0.0) {
    for (std::size_t j = 1; j <= K; ++j) eta[j] = mu[j];
  } else {
    const double log_q = std::log(q);
    const double log_r = std::log1p(-q);
    for (std::size_t j = 1; j <= K; ++j) {
      // Walk k upward from j; the log term changes by log((k+1)/(k+1-j)) + log q.
      // Past the mode (k > j/(1-q)) the terms only shrink, so stop once they
      // drop 60 nats below the largest one seen.
      double log_t = static_cast<double>(j) * log_r;
      double peak = log_t;
      double sum = 0.0;
      for (std::size_t k = j; k <= K; ++k) {
        if (mu.p[k] != 0.0) sum += mu.p[k] * std::exp(log_t);
        peak = std::max(peak, log_t);
        if (static_cast<double>(k) * (1.0 - q) > static_cast<double>(j) && log_t < peak - 60.0) break;
        log_t += std::log(static_cast<double>(k + 1) / static_cast<double>(k + 1 - j)) + log_q;
      }
      eta[j] = sum / (1.0 - q);
    }
  }
  return DiscreteDistribution(std::move(eta));
}

/*
 * Degree law matching the configuration model's rounding of Pareto weights
 * with P(w >= a) = a^-(beta-1): degree 1 collects w < 1.5 and degree k the
 * interval [k - 0.5, k + 0.5). Support is cut at K = floor(n^(1/(beta-1))),
 * and never beyond n - 1, then renormalized.
 */
inline DiscreteDistribution lambda_from_beta(double beta, std::size_t n) {
  if (!(beta > 1.0)) throw Error("degree distribution undefined (beta must exceed 1)");
  if (n < 2) throw Error("lambda_from_beta: n must be at least 2");
  const double a = beta - 1.0;
  double kmax = std::floor(std::pow(static_cast<double>(n), 1.0 / a));
  kmax = std::min(kmax, static_cast<double>(n - 1));
  const std::size_t K = std::max<std::size_t>(2, static_cast<std::size_t>(kmax));
  std::vector<double> p(K + 1, 0.0);
  p[1] = 1.0 - std::pow(1.5, -a);
  for (std::size_t k = 2; k <= K; ++k)
    p[k] = std::pow(static_cast<double>(k) - 0.5, -a) - std::pow(static_cast<double>(k) + 0.5, -a);
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return DiscreteDistribution(std::move(p));
}

enum class Regime { Dense, UltraSmall, Small };  // 1<b<2, 2<b<3, b>3

inline Regime regime_of(double beta) {
  if (!(beta > 1.0)) throw Error("degree distribution undefined (beta must exceed 1)");
  if (beta == 2.0 || beta == 3.0) throw Error("open case (beta = 2 and beta = 3 are not covered)");
  if (beta < 2.0) return Regime::Dense;
  return beta < 3.0 ? Regime::UltraSmall : Regime::Small;
}

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::Dense: return "1<beta<2";
    case Regime::UltraSmall: return "2<beta<3";
    case Regime::Small: return "beta>3";
  }
  return "?";
}

/*
 * Asymptotic predictions for power-law random graphs of exponent beta on n
 * vertices. Natural logarithms throughout; log_b(x) is ln x / ln b.
 *
 * For 1<beta<2 the closed-form diameter ( floor(3 + (beta-2)/(beta-1)) ) and
 * the value implied by the general diameter formula with the table entries
 * ( floor(3 + 2(beta-1)/(2-beta)) ) disagree; both are kept.
 */
struct Prediction {
  double beta = 0.0;
  std::size_t n = 0;
  Regime regime = Regime::UltraSmall;

  double q = std::numeric_limits<double>::quiet_NaN();      // extinction probability of mu
  double eta1 = std::numeric_limits<double>::quiet_NaN();   // eta(1)
  double M1_mu = std::numeric_limits<double>::quiet_NaN();  // mean of mu

  double d_avg_tilde = 0.0;
  double c = 0.0;  // tail decay constant; for 1<beta<2 equal to n^c_exponent
  std::optional<double> c_exponent;
  double diameter_pred = 0.0;
  std::optional<double> diameter_pred_alt;
  double avg_dist_low = 0.0;   // d_avg_tilde - 1
  double avg_dist_high = 0.0;  // d_avg_tilde
  std::optional<double> C;

  /// Predicted T~_d(n^x), at least 1.
  double t_tilde(double d, double x) const {
    const double log_n = std::log(static_cast<double>(n));
    switch (regime) {
      case Regime::Dense:
        return d >= std::pow(static_cast<double>(n), x) ? 1.0 : 2.0;
      case Regime::UltraSmall: {
        const double dd = std::max(d, 2.0);  // log d = 0 at d = 1
        double v = std::log(x * log_n / std::log(dd)) / std::log(1.0 / (beta - 2.0));
        return std::max(1.0, v);
      }
      case Regime::Small: {
        double v = (x * log_n - std::log(std::max(d, 1.0))) / std::log(M1_mu);
        return std::max(1.0, v);
      }
    }
    return 1.0;
  }
};

inline Prediction predict(double beta, std::size_t n, std::optional<DiscreteDistribution> lambda_truncated = std::nullopt) {
  Prediction pr;
  pr.beta = beta;
  pr.n = n;
  pr.regime = regime_of(beta);
  if (n < 2) throw Error("predict: n must be at least 2");
  const double log_n = std::log(static_cast<double>(n));

  DiscreteDistribution lambda = lambda_truncated ? *lambda_truncated : lambda_from_beta(beta, n);
  DiscreteDistribution mu = residual_distribution(lambda);
  pr.M1_mu = mu.mean();
  pr.q = extinction_probability(mu);
  // eta(1) = sum_k k mu(k) q^(k-1), the derivative of the generating function at q.
  if (pr.q < 1.0 - 1e-12) pr.eta1 = mu.pgf_derivative(pr.q);

  // -log eta(1), infinite when eta(1) = 0 (no degree-1 chains survive).
  auto neg_log_eta1 = [&] {
    if (std::isnan(pr.eta1)) throw Error("no giant component");
    return pr.eta1 > 0.0 ? -std::log(pr.eta1) : std::numeric_limits<double>::infinity();
  };

  switch (pr.regime) {
    case Regime::Dense: {
      pr.d_avg_tilde = 3.0;
      pr.c_exponent = -(2.0 - beta) / (beta - 1.0);
      pr.c = std::pow(static_cast<double>(n), *pr.c_exponent);
      pr.diameter_pred = std::floor(3.0 + (beta - 2.0) / (beta - 1.0));
      pr.diameter_pred_alt = std::floor(3.0 + 2.0 * (beta - 1.0) / (2.0 - beta));
      break;
    }
    case Regime::UltraSmall: {
      pr.d_avg_tilde = 2.0 * std::log(log_n) / std::log(1.0 / (beta - 2.0));
      pr.c = pr.eta1;
      pr.diameter_pred = 2.0 * log_n / neg_log_eta1();
      break;
    }
    case Regime::Small: {
      if (!(pr.M1_mu > 1.0)) throw Error("no giant component");
      pr.d_avg_tilde = log_n / std::log(pr.M1_mu);
      pr.c = pr.eta1;
      pr.diameter_pred = (2.0 / neg_log_eta1() + 1.0 / std::log(pr.M1_mu)) * log_n;
      break;
    }
  }
  pr.avg_dist_low = pr.d_avg_tilde - 1.0;
  pr.avg_dist_high = pr.d_avg_tilde;
  if (pr.diameter_pred > pr.d_avg_tilde) pr.C = 2.0 * pr.d_avg_tilde / (pr.diameter_pred - pr.d_avg_tilde);
  return pr;
}

}  // namespace mgraph
