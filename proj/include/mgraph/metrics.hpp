#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "mgraph/graph.hpp"
#include "mgraph/parallel.hpp"
#include "mgraph/random.hpp"

namespace mgraph {

/// Marker for "no level exceeds k" in dense tau arrays.
inline constexpr Distance kNoTau = kUnreached;

/// Level sizes gamma_l(s) of one BFS, with prefix sums.
struct NeighborhoodProfile {
  VertexId source = 0;
  std::vector<std::size_t> level_sizes;
  std::vector<std::size_t> cumulative;

  Distance eccentricity() const { return static_cast<Distance>(level_sizes.size() - 1); }

  /// Smallest level whose size exceeds k, if any.
  std::optional<Distance> tau(std::size_t k) const {
    for (std::size_t l = 0; l < level_sizes.size(); ++l)
      if (level_sizes[l] > k) return static_cast<Distance>(l);
    return std::nullopt;
  }
};

inline NeighborhoodProfile neighborhood_profile(const Graph& g, VertexId s) {
  NeighborhoodProfile p;
  p.source = s;
  Bfs search(g);
  search.run_levels(s, [&](Distance, std::size_t size) {
    p.level_sizes.push_back(size);
    p.cumulative.push_back(size + (p.cumulative.empty() ? 0 : p.cumulative.back()));
    return true;
  });
  return p;
}

inline std::optional<Distance> tau(const NeighborhoodProfile& profile, std::size_t k) { return profile.tau(k); }

/// ceil(n^x), guarded against pow() landing a hair above an exact integer.
inline std::size_t tau_threshold(std::size_t n, double x) {
  double v = std::pow(static_cast<double>(n), x);
  double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(v));
}

/*
 * Computes tau_s(k) for several thresholds with a single truncated BFS. The
 * search stops as soon as every threshold is settled: a threshold is met the
 * moment the level being built grows past it, and is hopeless once the
 * current level plus every still unvisited vertex of the component cannot
 * exceed it.
 */
class TauSearch {
 public:
  explicit TauSearch(Graph&&) = delete;
  explicit TauSearch(const Graph& g) : bfs_(g), labels_(component_labels(g)) {
    std::size_t count = 0;
    for (VertexId l : labels_) count = std::max<std::size_t>(count, l + 1);
    comp_size_.assign(count, 0);
    for (VertexId l : labels_) ++comp_size_[l];
  }

  /// ks must be nondecreasing; out[i] receives tau_s(ks[i]) or kNoTau.
  void compute(VertexId s, std::span<const std::size_t> ks, std::span<Distance> out) {
    std::fill(out.begin(), out.end(), kNoTau);
    const std::size_t reach = comp_size_[labels_[s]];
    std::size_t next = 0;  // first unsettled threshold
    std::size_t visited = 0;
    auto settle = [&](Distance level, std::size_t size) {
      while (next < ks.size() && size > ks[next]) out[next++] = level;
    };
    auto hopeless = [&](std::size_t building) {
      return next < ks.size() && building + (reach - visited) <= ks[next];
    };
    bfs_.run_levels(
        s,
        [&](Distance level, std::size_t) {
          if (level == 0) {
            visited = 1;
            settle(0, 1);
          }
          return next < ks.size() && !hopeless(0);
        },
        [&](Distance level, std::size_t found) {
          ++visited;
          settle(level, found);
          return next < ks.size() && !hopeless(found);
        });
  }

  Bfs& bfs() { return bfs_; }

 private:
  Bfs bfs_;
  std::vector<VertexId> labels_;
  std::vector<std::size_t> comp_size_;
};

/*
 * tau_s(ceil(n^x)) for the sampled vertices and every x in the grid, with
 * per-degree-class means T~_d. Averages skip vertices whose tau is undefined;
 * a class where every tau is undefined has no mean.
 */
struct TauTable {
  std::size_t n = 0;
  std::vector<double> x_grid;
  std::vector<std::size_t> thresholds;       // ceil(n^x) per grid entry
  std::vector<VertexId> vertices;            // sample, ascending
  std::vector<std::size_t> degree;           // per sampled vertex
  std::vector<std::vector<Distance>> tau;    // [x index][sample index], kNoTau if undefined
  std::vector<std::map<std::size_t, double>> class_mean;  // [x index] degree -> T~_d

  std::size_t x_index(double x) const {
    for (std::size_t i = 0; i < x_grid.size(); ++i)
      if (std::abs(x_grid[i] - x) < 1e-12) return i;
    throw Error("tau table does not cover x");
  }

  std::optional<double> t_tilde(std::size_t d, std::size_t xi) const {
    auto it = class_mean[xi].find(d);
    if (it == class_mean[xi].end()) return std::nullopt;
    return it->second;
  }

  /// CSV: vertex, degree, then one column per x; undefined tau is an empty field.
  void write_csv(std::ostream& out) const {
    out << "vertex,degree";
    for (double x : x_grid) out << ",tau_" << x;
    out << '\n';
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      out << vertices[i] << ',' << degree[i];
      for (std::size_t xi = 0; xi < x_grid.size(); ++xi) {
        out << ',';
        if (tau[xi][i] != kNoTau) out << tau[xi][i];
      }
      out << '\n';
    }
  }
};

inline void recompute_class_means(TauTable& t) {
  t.class_mean.assign(t.x_grid.size(), {});
  for (std::size_t xi = 0; xi < t.x_grid.size(); ++xi) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
      if (t.tau[xi][i] == kNoTau) continue;
      auto& [sum, cnt] = acc[t.degree[i]];
      sum += t.tau[xi][i];
      ++cnt;
    }
    for (auto& [d, sc] : acc) t.class_mean[xi][d] = sc.first / static_cast<double>(sc.second);
  }
}

inline TauTable tau_table(const Graph& g, const std::vector<double>& x_grid,
                          std::optional<std::vector<VertexId>> sample = std::nullopt) {
  TauTable t;
  t.n = g.num_vertices();
  t.x_grid = x_grid;
  if (sample) {
    t.vertices = *sample;
    std::sort(t.vertices.begin(), t.vertices.end());
    t.vertices.erase(std::unique(t.vertices.begin(), t.vertices.end()), t.vertices.end());
  } else {
    t.vertices.resize(t.n);
    for (std::size_t v = 0; v < t.n; ++v) t.vertices[v] = static_cast<VertexId>(v);
  }
  if (t.vertices.empty()) throw Error("tau table: empty sample");
  for (double x : x_grid) {
    if (!(x > 0.0 && x < 1.0)) throw Error("tau table: x must lie in (0,1)");
    t.thresholds.push_back(tau_threshold(t.n, x));
  }
  for (VertexId v : t.vertices)
    if (v >= t.n) throw Error("tau table: sample vertex out of range");

  // Thresholds in sorted order for the multi-threshold search.
  std::vector<std::size_t> order(x_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.thresholds[a] < t.thresholds[b]; });
  std::vector<std::size_t> ks;
  for (std::size_t i : order) ks.push_back(t.thresholds[i]);

  t.degree.resize(t.vertices.size());
  t.tau.assign(x_grid.size(), std::vector<Distance>(t.vertices.size(), kNoTau));
  parallel_for(
      t.vertices.size(), [&](unsigned) { return TauSearch(g); },
      [&](TauSearch& search, std::size_t i) {
        Distance out[64];
        std::vector<Distance> big;
        std::span<Distance> res(out, std::min<std::size_t>(ks.size(), 64));
        if (ks.size() > 64) {
          big.resize(ks.size());
          res = big;
        }
        search.compute(t.vertices[i], ks, res);
        for (std::size_t j = 0; j < ks.size(); ++j) t.tau[order[j]][i] = res[j];
        t.degree[i] = g.degree(t.vertices[i]);
      });
  recompute_class_means(t);
  return t;
}

/// Eccentricity of every vertex by one BFS each (O(nm)).
inline std::vector<Distance> all_eccentricities(const Graph& g) {
  std::vector<Distance> ecc(g.num_vertices());
  parallel_for(
      g.num_vertices(), [&](unsigned) { return Bfs(g); },
      [&](Bfs& b, std::size_t v) {
        b.run(static_cast<VertexId>(v));
        ecc[v] = b.last_eccentricity();
      });
  return ecc;
}

inline Distance eccentricity(const Graph& g, VertexId s) {
  Bfs b(g);
  b.run(s);
  return b.last_eccentricity();
}

inline void require_connected(const Graph& g, const char* what) {
  if (g.num_vertices() == 0) throw Error(std::string(what) + ": empty graph");
  if (!is_connected(g)) throw Error(std::string(what) + ": graph is not connected");
}

inline Distance exact_diameter(const Graph& g) {
  require_connected(g, "exact_diameter");
  auto ecc = all_eccentricities(g);
  return *std::max_element(ecc.begin(), ecc.end());
}

inline Distance exact_radius(const Graph& g) {
  require_connected(g, "exact_radius");
  auto ecc = all_eccentricities(g);
  return *std::min_element(ecc.begin(), ecc.end());
}

inline std::uint64_t farness(const Graph& g, VertexId s) {
  Bfs b(g);
  b.run(s);
  return b.last_distance_sum();
}

inline double closeness(const Graph& g, VertexId s) {
  auto f = farness(g, s);
  return f == 0 ? 0.0 : 1.0 / static_cast<double>(f);
}

/// Farness of every vertex (O(nm)).
inline std::vector<std::uint64_t> all_farness(const Graph& g) {
  std::vector<std::uint64_t> far(g.num_vertices());
  parallel_for(
      g.num_vertices(), [&](unsigned) { return Bfs(g); },
      [&](Bfs& b, std::size_t v) {
        b.run(static_cast<VertexId>(v));
        far[v] = b.last_distance_sum();
      });
  return far;
}

struct AverageDistance {
  double mean = 0.0;
  double std_error = 0.0;  // 0 when every vertex was a source
  std::size_t sample_size = 0;
};

inline std::size_t default_average_distance_sample(std::size_t n) { return std::min<std::size_t>(n, 1000); }

/*
 * Mean of farness(s)/(n-1) over a uniform sample of sources drawn without
 * replacement. The standard error includes the finite-population correction,
 * so a full sample reports zero error.
 */
inline AverageDistance average_distance(const Graph& g, std::size_t sample_size, std::uint64_t seed) {
  require_connected(g, "average_distance");
  const std::size_t n = g.num_vertices();
  if (n < 2) throw Error("average_distance: needs at least 2 vertices");
  if (sample_size == 0 || sample_size > n) throw Error("average_distance: sample size must be in [1, n]");
  SplitMix64 rng = SplitMix64::split(seed, 0xa7d15ULL);
  std::vector<VertexId> sources = sample_without_replacement(n, sample_size, rng);
  std::vector<std::uint64_t> far(sources.size());
  parallel_for(
      sources.size(), [&](unsigned) { return Bfs(g); },
      [&](Bfs& b, std::size_t i) {
        b.run(sources[i]);
        far[i] = b.last_distance_sum();
      });
  AverageDistance out;
  out.sample_size = far.size();
  const double k = static_cast<double>(far.size());
  const double pairs = static_cast<double>(n - 1);
  std::uint64_t total = 0;
  for (auto f : far) total += f;
  out.mean = static_cast<double>(total) / (k * pairs);
  if (far.size() > 1 && far.size() < n) {
    double ss = 0.0;
    for (auto f : far) {
      double v = static_cast<double>(f) / pairs - out.mean;
      ss += v * v;
    }
    double var = ss / (k - 1.0);
    double fpc = static_cast<double>(n - far.size()) / static_cast<double>(n - 1);
    out.std_error = std::sqrt(var / k * fpc);
  }
  return out;
}

/// 2 d / (D - d), the exponent constant of the bound-refinement running times.
inline double constant_C(double avg_distance, double diameter) {
  if (!(diameter > avg_distance)) throw Error("formula undefined (diameter does not exceed average distance)");
  return 2.0 * avg_distance / (diameter - avg_distance);
}

/// Average distance from a sample plus a diameter; the exact all-BFS diameter
/// is used when none is supplied.
inline double estimate_constant_C(const Graph& g, std::size_t sample_size, std::uint64_t seed,
                                  std::optional<Distance> diameter = std::nullopt) {
  double avg = average_distance(g, sample_size, seed).mean;
  Distance D = diameter ? *diameter : exact_diameter(g);
  return constant_C(avg, static_cast<double>(D));
}

struct TailFit {
  std::vector<std::size_t> counts;  // counts[i] is N_(i+1)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean squared residual of the log fit
  double c = 0.0;         // exp(slope)
};

/// Least-squares line through (k, ln N_k) for k = 1, 2, ... over the nonzero
/// counts. Needs at least three of them.
inline TailFit fit_tail_decay(const std::vector<std::size_t>& counts_from_1) {
  TailFit fit;
  fit.counts = counts_from_1;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < counts_from_1.size(); ++i)
    if (counts_from_1[i] > 0) {
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(std::log(static_cast<double>(counts_from_1[i])));
    }
  if (xs.size() < 3) throw Error("tail fit: fewer than 3 nonempty buckets");
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  fit.c = std::exp(fit.slope);
  return fit;
}

/// N_k = #{s : tau_s - T~_deg(s) >= k} for k = 1, 2, ... until it hits zero.
inline std::vector<std::size_t> deviation_tail_counts(const TauTable& table, std::size_t xi) {
  std::vector<double> dev;
  for (std::size_t i = 0; i < table.vertices.size(); ++i) {
    if (table.tau[xi][i] == kNoTau) continue;
    auto mean = table.t_tilde(table.degree[i], xi);
    if (mean) dev.push_back(static_cast<double>(table.tau[xi][i]) - *mean);
  }
  std::vector<std::size_t> counts;
  for (std::size_t k = 1;; ++k) {
    std::size_t c = 0;
    for (double d : dev)
      if (d >= static_cast<double>(k) - 1e-12) ++c;
    if (c == 0) break;
    counts.push_back(c);
  }
  return counts;
}

inline TailFit estimate_c_tail(const TauTable& table, double x) {
  return fit_tail_decay(deviation_tail_counts(table, table.x_index(x)));
}

}  // namespace mgraph
