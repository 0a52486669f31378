#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "mgraph/graph.hpp"
#include "mgraph/metrics.hpp"
#include "mgraph/parallel.hpp"
#include "mgraph/random.hpp"

namespace mgraph {

struct AlgoResult {
  std::string algo;
  Distance value = 0;
  std::vector<VertexId> witnesses;
  std::size_t bfs_count = 0;
  double wall_time_ms = 0.0;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void require_nonempty(const Graph& g, const char* what) {
  if (g.num_vertices() == 0) throw Error(std::string(what) + ": empty graph");
}

}  // namespace detail

/// Max eccentricity over k sources drawn uniformly without replacement.
inline AlgoResult sample_lower_bound(const Graph& g, std::size_t k, std::uint64_t seed) {
  detail::Stopwatch clock;
  detail::require_nonempty(g, "sample_lower_bound");
  const std::size_t n = g.num_vertices();
  if (k < 1 || k > n) throw Error("sample_lower_bound: k must be in [1, n]");
  SplitMix64 rng = SplitMix64::split(seed, 0x5a3b1eULL);
  auto sources = sample_without_replacement(n, k, rng);
  std::vector<Distance> ecc(k);
  std::vector<VertexId> far(k);
  parallel_for(
      k, [&](unsigned) { return Bfs(g); },
      [&](Bfs& b, std::size_t i) {
        b.run(sources[i]);
        ecc[i] = b.last_eccentricity();
        far[i] = b.last_farthest();
      });
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (ecc[i] > ecc[best] || (ecc[i] == ecc[best] && sources[i] < sources[best])) best = i;
  AlgoResult r;
  r.algo = "sample";
  r.value = ecc[best];
  r.witnesses = {sources[best], far[best]};
  r.bfs_count = k;
  r.params["k"] = static_cast<double>(k);
  r.seed = seed;
  r.wall_time_ms = clock.ms();
  return r;
}

/// BFS from start, then from the farthest vertex t found; reports ecc(t).
/// Without a start vertex one is drawn from the seed.
inline AlgoResult two_sweep(const Graph& g, std::optional<VertexId> start, std::uint64_t seed) {
  detail::Stopwatch clock;
  detail::require_nonempty(g, "two_sweep");
  VertexId s = start ? *start : static_cast<VertexId>(SplitMix64::split(seed, 0x25eeULL).below(g.num_vertices()));
  Bfs b(g);
  b.run(s);
  VertexId t = b.last_farthest();
  b.run(t);
  AlgoResult r;
  r.algo = "two_sweep";
  r.value = b.last_eccentricity();
  r.witnesses = {t, b.last_farthest()};
  r.bfs_count = b.runs();
  r.params["start"] = s;
  r.seed = seed;
  r.wall_time_ms = clock.ms();
  return r;
}

namespace detail {

/// Distance from the nearest of several sources.
inline std::vector<Distance> multi_source_distances(const Graph& g, const std::vector<VertexId>& sources) {
  std::vector<Distance> d(g.num_vertices(), kUnreached);
  std::vector<VertexId> queue;
  queue.reserve(g.num_vertices());
  for (VertexId s : sources)
    if (d[s] == kUnreached) {
      d[s] = 0;
      queue.push_back(s);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId u = queue[head];
    for (VertexId w : g.neighbors(u))
      if (d[w] == kUnreached) {
        d[w] = d[u] + 1;
        queue.push_back(w);
      }
  }
  return d;
}

}  // namespace detail

/*
 * Sampling-based approximation: k = min(n, ceil(sqrt(n) ln n)) random sources
 * S, the vertex t farthest from S, the k vertices T closest to t (distance,
 * then id), and the maximum eccentricity over S and T when the two sets meet.
 *
 * The maximum over S u T is evaluated exactly but lazily: every search from
 * u bounds ecc(v) <= ecc(u) + dist(u, v), candidates are searched in order of
 * decreasing bound, and the scan stops once no bound beats the best
 * eccentricity found. bfs_count counts the searches actually run, the
 * multi-source search and one bounding search from the top-degree vertex
 * included.
 */
inline AlgoResult rw_approx(const Graph& g, std::uint64_t seed) {
  detail::Stopwatch clock;
  const std::size_t n = g.num_vertices();
  if (n < 4) throw Error("rw_approx: needs n >= 4");
  const double nd = static_cast<double>(n);
  const std::size_t k = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(std::sqrt(nd) * std::log(nd))));

  Bfs b(g);
  std::size_t searches = 0;
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    SplitMix64 rng = SplitMix64::split(seed, 0x4a11ULL + attempt);
    auto S = sample_without_replacement(n, k, rng);
    auto mind = detail::multi_source_distances(g, S);
    ++searches;
    VertexId t = 0;
    for (VertexId v = 1; v < n; ++v)
      if (mind[v] != kUnreached && (mind[t] == kUnreached || mind[v] > mind[t])) t = v;
    b.run(t);
    const Distance ecc_t = b.last_eccentricity();
    std::vector<Distance> dist_t(b.distances().begin(), b.distances().end());

    std::vector<VertexId> T(b.visited().begin(), b.visited().end());
    std::stable_sort(T.begin(), T.end(), [&](VertexId a, VertexId c) {
      return dist_t[a] != dist_t[c] ? dist_t[a] < dist_t[c] : a < c;
    });
    if (T.size() > k) T.resize(k);

    std::vector<bool> inS(n, false);
    for (VertexId s : S) inS[s] = true;
    bool meet = std::any_of(T.begin(), T.end(), [&](VertexId v) { return inS[v]; });
    if (!meet) continue;

    // Upper bounds ecc(v) <= ecc(u) + dist(u, v) from every search run so far,
    // seeded with t and the highest-degree vertex (central in these graphs).
    std::vector<VertexId> cand = S;
    for (VertexId v : T)
      if (!inS[v]) cand.push_back(v);
    std::vector<Distance> ub(cand.size(), kUnreached);
    auto tighten = [&](std::span<const Distance> dist, Distance e) {
      for (std::size_t i = 0; i < cand.size(); ++i)
        if (dist[cand[i]] != kUnreached) ub[i] = std::min(ub[i], e + dist[cand[i]]);
    };
    tighten(dist_t, ecc_t);
    std::vector<bool> done(cand.size(), false);
    Distance best = 0;
    VertexId best_v = kNoVertex, best_far = kNoVertex;
    auto record = [&](VertexId v) {
      if (best_v == kNoVertex || b.last_eccentricity() > best) {
        best = b.last_eccentricity();
        best_v = v;
        best_far = b.last_farthest();
      }
    };
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (cand[i] == t) {
        done[i] = true;
        best = ecc_t;
        best_v = t;
        best_far = b.last_farthest();
      }
    const VertexId hub = g.max_degree_vertex();
    b.run(hub);
    tighten(b.distances(), b.last_eccentricity());
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (cand[i] == hub && !done[i]) {
        done[i] = true;
        record(hub);
      }
    while (true) {
      std::size_t pick = cand.size();
      for (std::size_t i = 0; i < cand.size(); ++i)
        if (!done[i] && (pick == cand.size() || ub[i] > ub[pick] || (ub[i] == ub[pick] && cand[i] < cand[pick]))) pick = i;
      if (pick == cand.size() || (best_v != kNoVertex && ub[pick] <= best)) break;
      done[pick] = true;
      b.run(cand[pick]);
      record(cand[pick]);
      tighten(b.distances(), b.last_eccentricity());
    }
    AlgoResult r;
    r.algo = "rw";
    r.value = best;
    r.witnesses = {best_v, best_far};
    r.bfs_count = searches + b.runs();
    r.params["k"] = static_cast<double>(k);
    r.params["attempts"] = static_cast<double>(attempt + 1);
    r.seed = seed;
    r.wall_time_ms = clock.ms();
    return r;
  }
  throw Error("RW failed");
}

/// Per-vertex eccentricity bounds shared by the SumSweep family.
struct BoundState {
  std::vector<Distance> L;
  std::vector<Distance> U;
  std::vector<Distance> ecc;  // kUnreached until the vertex is processed
  std::vector<VertexId> sources;
  Distance D_L = 0;
  Distance R_U = kUnreached;
  VertexId diameter_witness = kNoVertex;
  VertexId radius_witness = kNoVertex;

  explicit BoundState(std::size_t n = 0) : L(n, 0), U(n, kUnreached), ecc(n, kUnreached) {}

  bool processed(VertexId v) const { return ecc[v] != kUnreached; }

  /// Folds in one BFS from v (distances for the whole component).
  void absorb(VertexId v, std::span<const Distance> dist, Distance e) {
    for (std::size_t w = 0; w < L.size(); ++w) {
      Distance d = dist[w];
      if (d == kUnreached) continue;
      Distance lo = std::max(d, e >= d ? e - d : 0);
      L[w] = std::max(L[w], lo);
      U[w] = std::min(U[w], e + d);
    }
    ecc[v] = L[v] = U[v] = e;
    sources.push_back(v);
    if (e > D_L || diameter_witness == kNoVertex) {
      D_L = std::max(D_L, e);
      diameter_witness = v;
    }
    if (e < R_U) {
      R_U = e;
      radius_witness = v;
    }
  }

  Distance max_U() const { return *std::max_element(U.begin(), U.end()); }
  Distance min_L() const { return *std::min_element(L.begin(), L.end()); }
};

struct SumSweepOutput {
  BoundState state;
  AlgoResult result;
};

/*
 * k rounds of: BFS from a fresh random vertex s_i, then BFS from the
 * unprocessed vertex maximizing the summed distance from s_1..s_i. Returns
 * the bounds and max_v L(v) as a diameter lower bound.
 */
inline SumSweepOutput sumsweep_heuristic(const Graph& g, std::size_t k, std::uint64_t seed) {
  detail::Stopwatch clock;
  detail::require_nonempty(g, "sumsweep_heuristic");
  if (k < 1) throw Error("sumsweep_heuristic: k must be at least 1");
  const std::size_t n = g.num_vertices();
  SumSweepOutput out{BoundState(n), {}};
  BoundState& st = out.state;
  std::vector<std::uint64_t> sum(n, 0);
  SplitMix64 rng = SplitMix64::split(seed, 0x5005ULL);
  Bfs b(g);
  std::size_t done = 0;

  auto bfs_from = [&](VertexId v, bool accumulate) {
    auto dist = b.run(v);
    if (accumulate)
      for (VertexId w : b.visited()) sum[w] += dist[w];
    st.absorb(v, dist, b.last_eccentricity());
    ++done;
  };

  for (std::size_t round = 0; round < k && done < n; ++round) {
    VertexId s = static_cast<VertexId>(rng.below(n));
    while (st.processed(s)) s = static_cast<VertexId>(rng.below(n));
    bfs_from(s, true);
    if (done == n) break;
    VertexId t = kNoVertex;
    for (VertexId v = 0; v < n; ++v)
      if (!st.processed(v) && (t == kNoVertex || sum[v] > sum[t])) t = v;
    bfs_from(t, false);
  }

  AlgoResult& r = out.result;
  r.algo = "sumsweep";
  r.value = *std::max_element(st.L.begin(), st.L.end());
  r.witnesses = {st.diameter_witness};
  r.bfs_count = b.runs();
  r.params["k"] = static_cast<double>(k);
  r.seed = seed;
  r.wall_time_ms = clock.ms();
  return out;
}

/*
 * Exact diameter by fringe processing: BFS from the start vertex u, then BFS
 * from the vertices of each level of that tree, deepest level first. A pair
 * of vertices both at level <= l is at distance <= 2l, and any pair with a
 * deeper endpoint has already been measured from that endpoint, so once the
 * best eccentricity reaches 2l the rest cannot improve it.
 */
inline AlgoResult ifub(const Graph& g, std::optional<VertexId> start = std::nullopt) {
  detail::Stopwatch clock;
  require_connected(g, "ifub");
  const VertexId u = start ? *start : g.max_degree_vertex();
  Bfs root(g);
  root.run(u);
  std::vector<VertexId> order(root.visited().begin(), root.visited().end());
  std::vector<Distance> level(g.num_vertices());
  for (VertexId v : order) level[v] = root.distance(v);
  // Deepest first, ascending id inside a level.
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId c) {
    return level[a] != level[c] ? level[a] > level[c] : a < c;
  });

  Distance best = root.last_eccentricity();
  VertexId best_v = u, best_far = root.last_farthest();
  Bfs b(g);
  for (VertexId v : order) {
    if (2 * level[v] <= best) break;
    b.run(v);
    if (b.last_eccentricity() > best) {
      best = b.last_eccentricity();
      best_v = v;
      best_far = b.last_farthest();
    }
  }
  AlgoResult r;
  r.algo = "ifub";
  r.value = best;
  r.witnesses = {best_v, best_far};
  r.bfs_count = 1 + b.runs();
  r.params["start"] = u;
  r.wall_time_ms = clock.ms();
  return r;
}

struct ExactSumSweepParams {
  std::size_t initial_k = 10;
  std::size_t hub_period = 5;
  std::uint64_t seed = 0;
};

struct ExactSumSweepResult {
  AlgoResult diameter;
  AlgoResult radius;
  std::size_t total_bfs = 0;
};

/*
 * Exact diameter and radius by bound refinement. After the heuristic sweep,
 * steps alternate between the two goals:
 *   diameter: BFS from the unprocessed vertex with U > D_L of largest L;
 *   radius:   BFS from the unprocessed vertex with L < R_U of smallest L;
 * and every hub_period-th step instead searches from the highest-degree
 * unprocessed vertex. The diameter is certified once D_L >= max U, the radius
 * once R_U <= min L. Each result reports the searches run until its own
 * certificate held. The observer, if given, sees the state after every BFS.
 */
inline ExactSumSweepResult exact_sumsweep(const Graph& g, const ExactSumSweepParams& params = {},
                                          const std::function<void(const BoundState&)>& observer = {}) {
  detail::Stopwatch clock;
  require_connected(g, "exact_sumsweep");
  if (params.initial_k < 1) throw Error("exact_sumsweep: initial_k must be at least 1");
  const std::size_t n = g.num_vertices();
  auto init = sumsweep_heuristic(g, params.initial_k, params.seed);
  BoundState st = std::move(init.state);
  std::size_t count = init.result.bfs_count;
  if (observer) observer(st);

  std::vector<VertexId> by_degree(n);
  for (VertexId v = 0; v < n; ++v) by_degree[v] = v;
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](VertexId a, VertexId c) { return g.degree(a) > g.degree(c); });
  std::size_t hub_cursor = 0;

  std::optional<std::size_t> d_count, r_count;
  std::optional<double> d_time;
  auto check = [&] {
    if (!d_count && st.D_L >= st.max_U()) {
      d_count = count;
      d_time = clock.ms();
    }
    if (!r_count && st.R_U <= st.min_L()) r_count = count;
  };
  check();

  Bfs b(g);
  bool diameter_turn = true;
  for (std::size_t step = 0; !(d_count && r_count); ++step) {
    VertexId pick = kNoVertex;
    if (params.hub_period > 0 && step % params.hub_period == params.hub_period - 1) {
      while (hub_cursor < n && st.processed(by_degree[hub_cursor])) ++hub_cursor;
      if (hub_cursor < n) pick = by_degree[hub_cursor];
    }
    if (pick == kNoVertex) {
      bool want_d = !d_count && (diameter_turn || r_count);
      diameter_turn = !diameter_turn;
      for (VertexId v = 0; v < n; ++v) {
        if (st.processed(v)) continue;
        if (want_d) {
          if (st.U[v] > st.D_L && (pick == kNoVertex || st.L[v] > st.L[pick])) pick = v;
        } else {
          if (st.L[v] < st.R_U && (pick == kNoVertex || st.L[v] < st.L[pick])) pick = v;
        }
      }
    }
    if (pick == kNoVertex) {
      // Only possible when every vertex is processed; bounds are then exact.
      check();
      break;
    }
    auto dist = b.run(pick);
    st.absorb(pick, dist, b.last_eccentricity());
    ++count;
    if (observer) observer(st);
    check();
  }

  ExactSumSweepResult res;
  res.total_bfs = count;
  res.diameter.algo = "exact_sumsweep_diameter";
  res.diameter.value = st.D_L;
  res.diameter.witnesses = {st.diameter_witness};
  res.diameter.bfs_count = d_count.value_or(count);
  res.diameter.wall_time_ms = d_time.value_or(clock.ms());
  res.radius.algo = "exact_sumsweep_radius";
  res.radius.value = st.R_U;
  res.radius.witnesses = {st.radius_witness};
  res.radius.bfs_count = r_count.value_or(count);
  res.radius.wall_time_ms = clock.ms();
  for (AlgoResult* r : {&res.diameter, &res.radius}) {
    r->params["initial_k"] = static_cast<double>(params.initial_k);
    r->params["hub_period"] = static_cast<double>(params.hub_period);
    r->seed = params.seed;
  }
  return res;
}

struct TopKEntry {
  VertexId vertex;
  std::uint64_t farness;
  friend bool operator==(const TopKEntry&, const TopKEntry&) = default;
};

struct TopKResult {
  std::vector<TopKEntry> entries;  // ascending farness, then id
  std::size_t bfs_count = 0;       // searches started
  std::size_t pruned = 0;          // searches cut before completion
  std::uint64_t visited = 0;       // vertices dequeued over all searches
  double wall_time_ms = 0.0;
};

/*
 * Exact top-k closeness (smallest farness). Sources go by decreasing degree.
 * After level l of a search from v is complete, with r vertices seen and
 * partial sum f, the next level holds at most nd vertices, where nd is the
 * degree sum of level l minus one parent edge per vertex (the full degree at
 * l = 0). Every unseen vertex is at distance >= l+1 and all but nd of them at
 * >= l+2, giving
 *   farness(v) >= f + (l+1) min(n-r, nd) + (l+2) (n-r-min(n-r, nd)).
 * The search is dropped once this exceeds the current k-th farness, or equals
 * it while v has the larger id.
 */
inline TopKResult bcm_topk(const Graph& g, std::size_t k, bool prune = true) {
  detail::Stopwatch clock;
  require_connected(g, "bcm_topk");
  const std::size_t n = g.num_vertices();
  if (k < 1 || k > n) throw Error("bcm_topk: k must be in [1, n]");
  std::vector<VertexId> order(n);
  for (VertexId v = 0; v < n; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId c) { return g.degree(a) > g.degree(c); });

  auto worse = [](const TopKEntry& a, const TopKEntry& c) {
    return a.farness != c.farness ? a.farness < c.farness : a.vertex < c.vertex;
  };
  std::priority_queue<TopKEntry, std::vector<TopKEntry>, decltype(worse)> heap(worse);  // top = k-th best

  TopKResult res;
  Bfs b(g);
  for (VertexId v : order) {
    std::uint64_t f = 0;
    std::size_t seen = 0;
    bool cut = false;
    b.run_levels(v, [&](Distance level, std::size_t size) {
      auto vis = b.visited();
      seen = vis.size();
      std::uint64_t nd = 0;
      for (std::size_t i = seen - size; i < seen; ++i) nd += g.degree(vis[i]);
      f += static_cast<std::uint64_t>(level) * size;
      if (level > 0) nd -= size;
      if (!prune || heap.size() < k) return true;
      const std::uint64_t rest = n - seen;
      const std::uint64_t near = std::min<std::uint64_t>(rest, nd);
      const std::uint64_t bound = f + (level + 1ULL) * near + (level + 2ULL) * (rest - near);
      const TopKEntry& kth = heap.top();
      if (bound > kth.farness || (bound == kth.farness && v > kth.vertex)) {
        cut = true;
        return false;
      }
      return true;
    });
    res.visited += b.visited().size();
    if (cut) {
      ++res.pruned;
      continue;
    }
    TopKEntry e{v, f};
    if (heap.size() < k) {
      heap.push(e);
    } else if (worse(e, heap.top())) {
      heap.pop();
      heap.push(e);
    }
  }
  res.bfs_count = b.runs();
  while (!heap.empty()) {
    res.entries.push_back(heap.top());
    heap.pop();
  }
  std::reverse(res.entries.begin(), res.entries.end());
  res.wall_time_ms = clock.ms();
  return res;
}

/// Unpruned reference: every farness by full BFS, sorted.
inline std::vector<TopKEntry> brute_force_topk(const Graph& g, std::size_t k) {
  auto far = all_farness(g);
  std::vector<TopKEntry> all(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) all[v] = {v, far[v]};
  std::sort(all.begin(), all.end(), [](const TopKEntry& a, const TopKEntry& c) {
    return a.farness != c.farness ? a.farness < c.farness : a.vertex < c.vertex;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace mgraph
