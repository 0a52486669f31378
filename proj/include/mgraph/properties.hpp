#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mgraph/algos.hpp"
#include "mgraph/graph.hpp"
#include "mgraph/metrics.hpp"
#include "mgraph/parallel.hpp"
#include "mgraph/random.hpp"

namespace mgraph {

struct Verdict {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double threshold = 0.0;
};

/*
 * Outcome of one property check. histogram maps a bucket to its count; the
 * counts plus the rejected counts add up to sample_size. Each verdict carries
 * the observed number and the threshold it was compared against. series is a
 * table for plotting, NaN marking an undefined point.
 */
struct PropertyReport {
  int property_id = 0;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
  std::map<std::int64_t, std::size_t> histogram;
  std::map<std::string, std::size_t> rejected;
  std::map<std::string, double> values;
  std::vector<Verdict> verdicts;
  std::vector<std::string> series_columns;
  std::vector<std::vector<double>> series_rows;
  std::optional<std::string> note;

  bool pass() const {
    return !verdicts.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }

  const Verdict& verdict(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.name == name) return v;
    throw Error("report has no verdict '" + name + "'");
  }

  std::size_t histogram_total() const {
    std::size_t s = 0;
    for (auto [k, c] : histogram) s += c;
    return s;
  }

  std::size_t rejected_total() const {
    std::size_t s = 0;
    for (auto& [k, c] : rejected) s += c;
    return s;
  }

  /// Series as CSV; NaN becomes an empty field.
  void write_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < series_columns.size(); ++i) out << (i ? "," : "") << series_columns[i];
    out << '\n';
    for (const auto& row : series_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        if (!std::isnan(row[i])) out << row[i];
      }
      out << '\n';
    }
  }
};

struct DevThresholds {
  double share_at_most_1 = 0.99;
  double share_at_most_2 = 0.995;
};

/*
 * Part A: histogram of tau_s(n^x) - ceil(T~_deg(s)(n^x)) over vertices of
 * degree > n^eps. Part B: log-linear fit of #{s : tau_s - T~_deg(s) >= k}
 * over all vertices (reported, not judged).
 */
inline PropertyReport verify_dev(const Graph& g, double x, double eps = 0.2, DevThresholds th = {}) {
  if (!(x > 0.0 && x < 1.0)) throw Error("verify_dev: x must lie in (0,1)");
  PropertyReport rep;
  rep.property_id = 1;
  rep.parameters = {{"x", x}, {"eps", eps}, {"share_at_most_1", th.share_at_most_1}, {"share_at_most_2", th.share_at_most_2}};
  auto table = tau_table(g, {x});
  const double deg_cut = std::pow(static_cast<double>(g.num_vertices()), eps);

  std::size_t at_most_1 = 0, at_most_2 = 0, judged = 0;
  for (std::size_t i = 0; i < table.vertices.size(); ++i) {
    if (static_cast<double>(table.degree[i]) <= deg_cut) continue;
    ++rep.sample_size;
    if (table.tau[0][i] == kNoTau) {
      ++rep.rejected["tau_undefined"];
      continue;
    }
    auto mean = *table.t_tilde(table.degree[i], 0);
    auto dev = static_cast<std::int64_t>(table.tau[0][i]) - static_cast<std::int64_t>(std::ceil(mean - 1e-9));
    ++rep.histogram[dev];
    ++judged;
    if (dev <= 1) ++at_most_1;
    if (dev <= 2) ++at_most_2;
  }
  const double j = static_cast<double>(std::max<std::size_t>(judged, 1));
  double s1 = judged ? static_cast<double>(at_most_1) / j : 0.0;
  double s2 = judged ? static_cast<double>(at_most_2) / j : 0.0;
  rep.verdicts.push_back({"part_a_at_most_1", judged > 0 && s1 >= th.share_at_most_1, s1, th.share_at_most_1});
  rep.verdicts.push_back({"part_a_at_most_2", judged > 0 && s2 >= th.share_at_most_2, s2, th.share_at_most_2});

  auto counts = deviation_tail_counts(table, 0);
  rep.series_columns = {"k", "count", "fraction"};
  for (std::size_t k = 0; k < counts.size(); ++k)
    rep.series_rows.push_back({static_cast<double>(k + 1), static_cast<double>(counts[k]),
                               static_cast<double>(counts[k]) / static_cast<double>(table.vertices.size())});
  try {
    auto fit = fit_tail_decay(counts);
    rep.values["c"] = fit.c;
    rep.values["fit_residual"] = fit.residual;
  } catch (const Error& e) {
    rep.note = std::string("part B: ") + e.what();
  }
  return rep;
}

struct TouchOptions {
  double min_strict_share = 0.9;
  std::optional<std::size_t> kx;  // overrides ceil(n^x)
  std::optional<std::size_t> ky;  // overrides ceil(n^y)
};

/*
 * Histogram of tau_s(n^x) + tau_t(n^y) - dist(s,t) over uniformly drawn
 * pairs. Pairs in different components or with an undefined tau are counted
 * as rejected. Passes when the slack is positive for the required share of
 * the remaining pairs. The x + y > 1 precondition is reported, not enforced.
 */
inline PropertyReport verify_touch(const Graph& g, double x, double y, std::size_t pair_sample, std::uint64_t seed,
                                   TouchOptions opt = {}) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw Error("verify_touch: empty graph");
  if (pair_sample == 0) throw Error("verify_touch: pair sample must be positive");
  PropertyReport rep;
  rep.property_id = 2;
  rep.seed = seed;
  rep.sample_size = pair_sample;
  const std::size_t kx = opt.kx ? *opt.kx : tau_threshold(n, x);
  const std::size_t ky = opt.ky ? *opt.ky : tau_threshold(n, y);
  rep.parameters = {{"x", x}, {"y", y}, {"kx", static_cast<double>(kx)}, {"ky", static_cast<double>(ky)},
                    {"pair_sample", static_cast<double>(pair_sample)}, {"min_strict_share", opt.min_strict_share},
                    {"precondition_x_plus_y_gt_1", x + y > 1.0 ? 1.0 : 0.0}};

  SplitMix64 rng = SplitMix64::split(seed, 0x70c4ULL);
  std::vector<std::pair<VertexId, VertexId>> pairs(pair_sample);
  for (auto& p : pairs) {
    p.first = static_cast<VertexId>(rng.below(n));
    p.second = static_cast<VertexId>(rng.below(n));
  }
  enum : std::int64_t { kCross = std::numeric_limits<std::int64_t>::min(), kNoTauPair = kCross + 1 };
  std::vector<std::int64_t> slack(pair_sample);
  struct Scratch {
    TauSearch tau;
    PointToPoint p2p;
  };
  parallel_for(
      pair_sample, [&](unsigned) { return Scratch{TauSearch(g), PointToPoint(g)}; },
      [&](Scratch& sc, std::size_t i) {
        auto [s, t] = pairs[i];
        Distance d = sc.p2p.distance(s, t);
        if (d == kUnreached) {
          slack[i] = kCross;
          return;
        }
        Distance ts, tt;
        std::size_t a[1] = {kx}, b[1] = {ky};
        sc.tau.compute(s, a, std::span<Distance>(&ts, 1));
        sc.tau.compute(t, b, std::span<Distance>(&tt, 1));
        if (ts == kNoTau || tt == kNoTau) {
          slack[i] = kNoTauPair;
          return;
        }
        slack[i] = static_cast<std::int64_t>(ts) + static_cast<std::int64_t>(tt) - static_cast<std::int64_t>(d);
      });
  std::size_t strict = 0, judged = 0;
  for (auto v : slack) {
    if (v == kCross) {
      ++rep.rejected["cross_component"];
    } else if (v == kNoTauPair) {
      ++rep.rejected["tau_undefined"];
    } else {
      ++rep.histogram[v];
      ++judged;
      if (v > 0) ++strict;
    }
  }
  double share = judged ? static_cast<double>(strict) / static_cast<double>(judged) : 0.0;
  rep.values["strict_share"] = share;
  rep.verdicts.push_back({"strict_share", judged > 0 && share >= opt.min_strict_share, share, opt.min_strict_share});
  rep.series_columns = {"slack", "count", "percent"};
  for (auto [k, c] : rep.histogram)
    rep.series_rows.push_back({static_cast<double>(k), static_cast<double>(c), 100.0 * static_cast<double>(c) / static_cast<double>(std::max<std::size_t>(judged, 1))});
  return rep;
}

struct UntouchOptions {
  std::optional<VertexId> source;
  double tolerance = 0.05;
  std::optional<Distance> diameter;  // for the conditioned variants; computed when absent
};

/// Per-target outcome of the untouch scan, exposed for stability tests.
struct UntouchScan {
  std::size_t grid_points = 0;          // x, y range over i * resolution, i = 1..grid_points
  double resolution = 0.0;
  VertexId source = 0;
  std::vector<VertexId> targets;
  std::vector<std::size_t> z_index;     // i + j of the first violation; kNoZ when none
  std::vector<Distance> tau_half;       // tau_t(ceil(n^0.5)) per target
  static constexpr std::size_t kNoZ = std::numeric_limits<std::size_t>::max();

  /// N_z: targets whose z_t is strictly below grid value c * resolution.
  std::size_t count_below(std::size_t c, const std::vector<bool>* mask = nullptr) const {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < targets.size(); ++i)
      if ((!mask || (*mask)[i]) && z_index[i] != kNoZ && z_index[i] < c) ++cnt;
    return cnt;
  }
};

/*
 * For each target t: z_t = min{x + y : x > y, tau_s(n^x) + tau_t(n^y) >
 * dist(s,t) + 2}, the smallest exponent sum at which the pair breaks
 * dist(s,t) >= tau_s(n^x) + tau_t(n^y) - 2. Grid pairs with an undefined tau
 * never count as violations.
 */
inline UntouchScan untouch_scan(const Graph& g, VertexId s, const std::vector<VertexId>& targets, double resolution) {
  const std::size_t n = g.num_vertices();
  if (!(resolution > 0.0 && resolution < 0.5)) throw Error("verify_untouch: resolution must lie in (0, 0.5)");
  UntouchScan scan;
  scan.resolution = resolution;
  scan.grid_points = static_cast<std::size_t>(std::llround(std::ceil(1.0 / resolution - 1e-9))) - 1;
  scan.source = s;
  scan.targets = targets;
  const std::size_t m = scan.grid_points;

  std::vector<std::size_t> ks(m);
  for (std::size_t i = 0; i < m; ++i) ks[i] = tau_threshold(n, static_cast<double>(i + 1) * resolution);
  const std::size_t k_half = tau_threshold(n, 0.5);
  // Thresholds are nondecreasing in i; k_half goes in at its sorted position.
  std::vector<std::size_t> ks_t = ks;
  auto pos = static_cast<std::size_t>(std::lower_bound(ks_t.begin(), ks_t.end(), k_half) - ks_t.begin());
  ks_t.insert(ks_t.begin() + static_cast<std::ptrdiff_t>(pos), k_half);

  std::vector<Distance> tau_s(m);
  {
    TauSearch ts(g);
    ts.compute(s, ks, tau_s);
  }
  Bfs from_s(g);
  auto dist_s_span = from_s.run(s);
  std::vector<Distance> dist_s(dist_s_span.begin(), dist_s_span.end());

  scan.z_index.assign(targets.size(), UntouchScan::kNoZ);
  scan.tau_half.assign(targets.size(), kNoTau);
  parallel_for(
      targets.size(), [&](unsigned) { return TauSearch(g); },
      [&](TauSearch& ts, std::size_t idx) {
        const VertexId t = targets[idx];
        std::vector<Distance> out(ks_t.size());
        ts.compute(t, ks_t, out);
        scan.tau_half[idx] = out[pos];
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
        const Distance d = dist_s[t];
        if (d == kUnreached) return;
        std::size_t best = UntouchScan::kNoZ;
        for (std::size_t xi = 1; xi < m; ++xi) {  // x = (xi+1) r, y = (yi+1) r, yi < xi
          if (tau_s[xi] == kNoTau) continue;
          for (std::size_t yi = 0; yi < xi; ++yi) {
            if (out[yi] == kNoTau) continue;
            if (static_cast<std::uint64_t>(tau_s[xi]) + out[yi] > static_cast<std::uint64_t>(d) + 2) {
              best = std::min(best, xi + yi + 2);
              break;  // larger y only grows x + y
            }
          }
        }
        scan.z_index[idx] = best;
      });
  return scan;
}

/*
 * Curve z -> 1 + log(N_z/|T|)/log n over one random source s and a uniform
 * target sample T, plus the same curve restricted to targets with
 * tau_t(n^0.5) in [0, D/6), [D/6, D/3), [D/3, inf). Verdicts: "z_ge_1" checks
 * curve <= z + tolerance on z >= 1; "all_z" checks it on the whole grid.
 */
inline PropertyReport verify_untouch(const Graph& g, std::size_t t_sample, double z_resolution, std::uint64_t seed,
                                     UntouchOptions opt = {}) {
  const std::size_t n = g.num_vertices();
  if (t_sample < 100) throw Error("verify_untouch: target sample must be at least 100");
  if (n < 2) throw Error("verify_untouch: graph too small");
  PropertyReport rep;
  rep.property_id = 3;
  rep.seed = seed;
  SplitMix64 rng = SplitMix64::split(seed, 0x0e7cULL);
  VertexId s = opt.source ? *opt.source : static_cast<VertexId>(rng.below(n));
  if (s >= n) throw Error("verify_untouch: source out of range");
  // Targets come from V minus {s}; the pair (s, s) says nothing about touching.
  auto targets = sample_without_replacement(n - 1, std::min(t_sample, n - 1), rng);
  for (auto& t : targets)
    if (t >= s) ++t;
  std::sort(targets.begin(), targets.end());
  rep.sample_size = targets.size();

  auto scan = untouch_scan(g, s, targets, z_resolution);
  const double log_n = std::log(static_cast<double>(n));

  std::optional<Distance> D = opt.diameter;
  if (!D && is_connected(g)) D = ifub(g).value;

  rep.parameters = {{"source", static_cast<double>(s)}, {"t_sample", static_cast<double>(targets.size())},
                    {"z_resolution", z_resolution}, {"tolerance", opt.tolerance},
                    {"grid_points", static_cast<double>(scan.grid_points)}};
  if (D) rep.parameters["diameter"] = *D;

  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (scan.z_index[i] == UntouchScan::kNoZ)
      ++rep.rejected["no_violation"];
    else
      ++rep.histogram[static_cast<std::int64_t>(scan.z_index[i])];
  }

  // Conditioned target sets.
  std::vector<bool> low(targets.size(), false), mid(targets.size(), false), high(targets.size(), false);
  if (D) {
    const double d6 = *D / 6.0, d3 = *D / 3.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (scan.tau_half[i] == kNoTau) continue;
      double th = scan.tau_half[i];
      (th < d6 ? low : th < d3 ? mid : high)[i] = true;
    }
  }
  auto curve = [&](std::size_t c, const std::vector<bool>* mask) {
    std::size_t size = targets.size();
    if (mask) size = static_cast<std::size_t>(std::count(mask->begin(), mask->end(), true));
    std::size_t nz = scan.count_below(c, mask);
    if (nz == 0 || size == 0) return std::numeric_limits<double>::quiet_NaN();
    return 1.0 + std::log(static_cast<double>(nz) / static_cast<double>(size)) / log_n;
  };

  rep.series_columns = {"z", "n_z", "all", "tau_lt_D6", "tau_D6_D3", "tau_ge_D3"};
  double worst_ge1 = -std::numeric_limits<double>::infinity();
  double worst_all = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c <= 2 * scan.grid_points; ++c) {
    const double z = static_cast<double>(c) * z_resolution;
    const double v = curve(c, nullptr);
    rep.series_rows.push_back({z, static_cast<double>(scan.count_below(c)), v, D ? curve(c, &low) : NAN,
                               D ? curve(c, &mid) : NAN, D ? curve(c, &high) : NAN});
    if (std::isnan(v)) continue;
    worst_all = std::max(worst_all, v - z);
    if (z >= 1.0 - 1e-12) worst_ge1 = std::max(worst_ge1, v - z);
  }
  auto finite_or_zero = [](double v) { return std::isfinite(v) ? v : 0.0; };
  rep.values["max_excess_z_ge_1"] = finite_or_zero(worst_ge1);
  rep.values["max_excess_all_z"] = finite_or_zero(worst_all);
  rep.verdicts.push_back({"z_ge_1", !(worst_ge1 > opt.tolerance), finite_or_zero(worst_ge1), opt.tolerance});
  rep.verdicts.push_back({"all_z", !(worst_all > opt.tolerance), finite_or_zero(worst_all), opt.tolerance});
  return rep;
}

/*
 * Log-log least squares of #{v : deg(v) > d} against d over a log-spaced
 * integer grid on [4, max_degree/4]. Passes when the slope is within
 * tolerance of -max(1, beta - 1).
 */
inline PropertyReport verify_degree(const Graph& g, double beta, double tolerance = 0.3, std::size_t grid_size = 20) {
  if (!(beta > 1.0)) throw Error("degree distribution undefined (beta must exceed 1)");
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> deg(n);
  for (VertexId v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::vector<std::size_t> distinct = deg;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw Error("degenerate tail (fewer than 3 distinct degree values)");

  PropertyReport rep;
  rep.property_id = 4;
  rep.sample_size = n;
  const double expected = -std::max(1.0, beta - 1.0);
  rep.parameters = {{"beta", beta}, {"tolerance", tolerance}, {"expected_slope", expected}};
  std::sort(deg.begin(), deg.end());
  const std::size_t maxdeg = deg.empty() ? 0 : deg.back();
  for (std::size_t d : deg) ++rep.histogram[static_cast<std::int64_t>(d)];

  std::vector<std::size_t> grid;
  const double lo = 4.0, hi = static_cast<double>(maxdeg) / 4.0;
  if (hi >= lo) {
    for (std::size_t i = 0; i < grid_size; ++i) {
      double f = grid_size == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(grid_size - 1);
      grid.push_back(static_cast<std::size_t>(std::floor(lo * std::pow(hi / lo, f))));
    }
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  }
  std::vector<double> xs, ys;
  rep.series_columns = {"d", "count_gt_d"};
  for (std::size_t d : grid) {
    auto cnt = static_cast<std::size_t>(deg.end() - std::upper_bound(deg.begin(), deg.end(), d));
    rep.series_rows.push_back({static_cast<double>(d), static_cast<double>(cnt)});
    if (cnt == 0) continue;
    xs.push_back(std::log(static_cast<double>(d)));
    ys.push_back(std::log(static_cast<double>(cnt)));
  }
  if (xs.size() < 2) {
    rep.note = "fewer than 2 grid points with a nonempty tail";
    rep.verdicts.push_back({"slope", false, std::numeric_limits<double>::quiet_NaN(), tolerance});
    return rep;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  rep.values["slope"] = slope;
  rep.values["max_degree"] = static_cast<double>(maxdeg);
  rep.verdicts.push_back({"slope", std::abs(slope - expected) <= tolerance, slope, tolerance});
  return rep;
}

}  // namespace mgraph
