#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mgraph {

using VertexId = std::uint32_t;
using Distance = std::uint32_t;

/// Reserved "not reached" distance. Maximal so that min/max arithmetic on
/// distances stays monotone.
inline constexpr Distance kUnreached = std::numeric_limits<Distance>::max();
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*
 * Immutable undirected simple graph in compressed adjacency form.
 *
 * Vertices are 0..n-1. offsets has n+1 entries, neighbors 2m entries; the
 * neighbor list of every vertex is strictly increasing and never contains the
 * vertex itself. Safe for concurrent readers.
 */
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Takes ownership of a compressed adjacency. Throws if the arrays are not a
  /// valid simple symmetric adjacency.
  Graph(std::vector<std::size_t> offsets, std::vector<VertexId> neighbors)
      : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)) {
    validate();
  }

  std::size_t num_vertices() const { return offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(VertexId u, VertexId v) const {
    auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const VertexId> adjacency() const { return neighbors_; }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (std::size_t v = 0; v < num_vertices(); ++v) best = std::max(best, degree(static_cast<VertexId>(v)));
    return best;
  }

  /// Highest-degree vertex, lowest id on ties.
  VertexId max_degree_vertex() const {
    VertexId best = 0;
    for (VertexId v = 1; v < num_vertices(); ++v)
      if (degree(v) > degree(best)) best = v;
    return best;
  }

  /// Full invariant check: offsets shape, sorted lists, no loops/duplicates,
  /// symmetric adjacency.
  void validate() const {
    const std::size_t n = num_vertices();
    if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != neighbors_.size())
      throw Error("graph: malformed offsets");
    if (neighbors_.size() % 2 != 0) throw Error("graph: odd adjacency size");
    for (std::size_t v = 0; v < n; ++v) {
      if (offsets_[v] > offsets_[v + 1]) throw Error("graph: offsets not monotone");
      auto adj = neighbors(static_cast<VertexId>(v));
      for (std::size_t i = 0; i < adj.size(); ++i) {
        if (adj[i] >= n) throw Error("graph: neighbor out of range");
        if (adj[i] == v) throw Error("graph: self-loop");
        if (i > 0 && adj[i - 1] >= adj[i]) throw Error("graph: neighbor list not strictly sorted");
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      for (VertexId w : neighbors(static_cast<VertexId>(v)))
        if (!has_edge(w, static_cast<VertexId>(v))) throw Error("graph: adjacency not symmetric");
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> neighbors_;
};

/// Builds a simple graph on exactly n vertices (isolated ones allowed) from
/// an edge multiset. Self-loops and parallel edges are dropped.
inline Graph make_simple_graph(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges) {
  std::vector<std::size_t> offsets(n + 1, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error("make_simple_graph: vertex id out of range");
    if (u == v) continue;
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<VertexId> adj(offsets[n]);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    adj[cursor[u]++] = v;
    adj[cursor[v]++] = u;
  }
  // Sort and deduplicate in place, compacting lists towards the front.
  std::vector<std::size_t> compact(n + 1, 0);
  std::size_t write = 0;
  for (std::size_t v = 0; v < n; ++v) {
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = adj.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    compact[v] = write;
    for (auto it = first; it != last; ++it) adj[write++] = *it;
  }
  compact[n] = write;
  adj.resize(write);
  adj.shrink_to_fit();
  return Graph(std::move(compact), std::move(adj));
}

/// Graph plus the original id of each new vertex.
struct RemappedGraph {
  Graph graph;
  std::vector<std::uint64_t> original_ids;  // new id -> original id
};

/// Builds a simple undirected graph from arbitrary nonnegative id pairs.
/// Ids are remapped to 0..n-1 in increasing order of original id, so inputs
/// that already use 0..n-1 keep their ids.
inline RemappedGraph build_from_edges(std::span<const std::pair<std::uint64_t, std::uint64_t>> pairs) {
  if (pairs.empty()) throw Error("empty graph");
  std::vector<std::uint64_t> ids;
  ids.reserve(pairs.size() * 2);
  for (auto [u, v] : pairs) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() >= kNoVertex) throw Error("build_from_edges: too many vertices");

  auto lookup = [&](std::uint64_t id) {
    return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::pair<VertexId, VertexId>> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.emplace_back(lookup(u), lookup(v));
  return {make_simple_graph(ids.size(), edges), std::move(ids)};
}

inline RemappedGraph build_from_edges(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  return build_from_edges(std::span<const std::pair<std::uint64_t, std::uint64_t>>(pairs));
}

/// Hop distances from one source.
struct DistanceArray {
  VertexId source = 0;
  std::vector<Distance> dist;
};

/*
 * Reusable breadth-first search over one graph. Owns its queue and distance
 * array; reset cost is proportional to the previously visited set, so many
 * short searches stay cheap. Not thread-safe: use one instance per thread.
 */
class Bfs {
 public:
  explicit Bfs(Graph&&) = delete;
  explicit Bfs(const Graph& g) : g_(&g), dist_(g.num_vertices(), kUnreached) {
    queue_.reserve(g.num_vertices());
  }

  const Graph& graph() const { return *g_; }

  /// Full search from s. Returns distances indexed by vertex.
  std::span<const Distance> run(VertexId s) {
    start(s);
    std::size_t head = 0;
    while (head < queue_.size()) {
      VertexId u = queue_[head++];
      Distance du = dist_[u] + 1;
      for (VertexId w : g_->neighbors(u)) {
        if (dist_[w] == kUnreached) {
          dist_[w] = du;
          queue_.push_back(w);
        }
      }
    }
    ++runs_;
    return dist_;
  }

  /*
   * Level-synchronous search that calls on_level(level, size) after each
   * level is complete (level 0 included) and stops when it returns false.
   * on_partial(level, discovered_so_far) is called after every newly
   * discovered vertex of the level in progress; returning false aborts the
   * search immediately. Distances are valid for visited vertices only.
   */
  template <class LevelFn, class PartialFn>
  void run_levels(VertexId s, LevelFn&& on_level, PartialFn&& on_partial) {
    start(s);
    ++runs_;
    std::size_t level_begin = 0;
    Distance level = 0;
    while (level_begin < queue_.size()) {
      std::size_t level_end = queue_.size();
      if (!on_level(level, level_end - level_begin)) return;
      std::size_t found = 0;
      for (std::size_t i = level_begin; i < level_end; ++i) {
        VertexId u = queue_[i];
        for (VertexId w : g_->neighbors(u)) {
          if (dist_[w] == kUnreached) {
            dist_[w] = level + 1;
            queue_.push_back(w);
            if (!on_partial(level + 1, ++found)) return;
          }
        }
      }
      level_begin = level_end;
      ++level;
    }
  }

  template <class LevelFn>
  void run_levels(VertexId s, LevelFn&& on_level) {
    run_levels(s, std::forward<LevelFn>(on_level), [](Distance, std::size_t) { return true; });
  }

  std::span<const Distance> distances() const { return dist_; }
  Distance distance(VertexId v) const { return dist_[v]; }

  /// Vertices visited by the last search, in BFS order.
  std::span<const VertexId> visited() const { return queue_; }

  /// Eccentricity of the last source within its component.
  Distance last_eccentricity() const { return queue_.empty() ? 0 : dist_[queue_.back()]; }

  /// Farthest vertex of the last search, lowest id on ties.
  VertexId last_farthest() const {
    if (queue_.empty()) return kNoVertex;
    Distance ecc = last_eccentricity();
    VertexId best = queue_.back();
    for (auto it = queue_.rbegin(); it != queue_.rend() && dist_[*it] == ecc; ++it) best = std::min(best, *it);
    return best;
  }

  std::uint64_t last_distance_sum() const {
    std::uint64_t sum = 0;
    for (VertexId v : queue_) sum += dist_[v];
    return sum;
  }

  /// Number of searches started through this instance.
  std::size_t runs() const { return runs_; }

 private:
  void start(VertexId s) {
    if (s >= g_->num_vertices()) throw Error("bfs: source out of range");
    for (VertexId v : queue_) dist_[v] = kUnreached;
    queue_.clear();
    dist_[s] = 0;
    queue_.push_back(s);
  }

  const Graph* g_;
  std::vector<Distance> dist_;
  std::vector<VertexId> queue_;
  std::size_t runs_ = 0;
};

inline DistanceArray bfs(const Graph& g, VertexId s) {
  Bfs search(g);
  auto d = search.run(s);
  return {s, std::vector<Distance>(d.begin(), d.end())};
}

/// Exact hop distance between two vertices by bidirectional search, always
/// expanding the smaller frontier. Returns kUnreached across components.
class PointToPoint {
 public:
  explicit PointToPoint(Graph&&) = delete;
  explicit PointToPoint(const Graph& g)
      : g_(&g), side_(g.num_vertices(), 0), dist_(g.num_vertices(), 0) {}

  Distance distance(VertexId s, VertexId t) {
    if (s >= g_->num_vertices() || t >= g_->num_vertices()) throw Error("distance: vertex out of range");
    if (s == t) return 0;
    for (VertexId v : touched_) side_[v] = 0;
    touched_.clear();
    std::vector<VertexId> front[2] = {{s}, {t}};
    Distance depth[2] = {0, 0};
    mark(s, 1, 0);
    mark(t, 2, 0);
    std::vector<VertexId> next;
    while (!front[0].empty() && !front[1].empty()) {
      int side = volume(front[0]) <= volume(front[1]) ? 0 : 1;
      std::uint8_t mine = static_cast<std::uint8_t>(side + 1);
      Distance best = kUnreached;
      next.clear();
      for (VertexId u : front[side]) {
        for (VertexId w : g_->neighbors(u)) {
          if (side_[w] == mine) continue;
          if (side_[w] != 0) {
            best = std::min<Distance>(best, depth[side] + 1 + dist_[w]);
            continue;
          }
          mark(w, mine, depth[side] + 1);
          next.push_back(w);
        }
      }
      if (best != kUnreached) return best;
      ++depth[side];
      front[side].swap(next);
    }
    return kUnreached;
  }

 private:
  std::size_t volume(const std::vector<VertexId>& f) const {
    std::size_t vol = 0;
    for (VertexId v : f) vol += g_->degree(v);
    return vol;
  }
  void mark(VertexId v, std::uint8_t side, Distance d) {
    side_[v] = side;
    dist_[v] = d;
    touched_.push_back(v);
  }

  const Graph* g_;
  std::vector<std::uint8_t> side_;
  std::vector<Distance> dist_;
  std::vector<VertexId> touched_;
};

/// Induced subgraph together with the id maps in both directions.
struct Subgraph {
  Graph graph;
  std::vector<VertexId> old_to_new;  // kNoVertex for dropped vertices
  std::vector<VertexId> new_to_old;
};

/// Connected component label per vertex; components are numbered in order of
/// their smallest vertex.
inline std::vector<VertexId> component_labels(const Graph& g, std::size_t* count = nullptr) {
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> label(n, kNoVertex);
  std::vector<VertexId> stack;
  VertexId next = 0;
  for (VertexId r = 0; r < n; ++r) {
    if (label[r] != kNoVertex) continue;
    label[r] = next;
    stack.push_back(r);
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      for (VertexId w : g.neighbors(u))
        if (label[w] == kNoVertex) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

inline bool is_connected(const Graph& g) {
  std::size_t count = 0;
  component_labels(g, &count);
  return count <= 1;
}

/// Subgraph induced by `keep`; new ids follow increasing old ids.
inline Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
  const std::size_t n = g.num_vertices();
  Subgraph sub;
  sub.old_to_new.assign(n, kNoVertex);
  for (VertexId v = 0; v < n; ++v)
    if (keep[v]) {
      sub.old_to_new[v] = static_cast<VertexId>(sub.new_to_old.size());
      sub.new_to_old.push_back(v);
    }
  std::vector<std::size_t> offsets(sub.new_to_old.size() + 1, 0);
  std::vector<VertexId> adj;
  for (std::size_t i = 0; i < sub.new_to_old.size(); ++i) {
    for (VertexId w : g.neighbors(sub.new_to_old[i]))
      if (sub.old_to_new[w] != kNoVertex) adj.push_back(sub.old_to_new[w]);
    offsets[i + 1] = adj.size();
  }
  sub.graph = Graph(std::move(offsets), std::move(adj));
  return sub;
}

/// Largest connected component; ties go to the component holding the
/// smallest vertex id.
inline Subgraph giant_component(const Graph& g) {
  std::size_t count = 0;
  auto label = component_labels(g, &count);
  std::vector<std::size_t> size(count, 0);
  for (VertexId l : label) ++size[l];
  VertexId best = 0;
  for (VertexId c = 1; c < count; ++c)
    if (size[c] > size[best]) best = c;
  std::vector<bool> keep(g.num_vertices());
  for (std::size_t v = 0; v < keep.size(); ++v) keep[v] = count > 0 && label[v] == best;
  return induced_subgraph(g, keep);
}

}  // namespace mgraph
