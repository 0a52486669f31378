#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mgraph/graph.hpp"

namespace mgraph {

struct LabelEntry {
  VertexId hub;
  Distance dist;
  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

struct LabelStats {
  double avg_label_size = 0.0;
  std::size_t max_label_size = 0;
  std::uint64_t total_entries = 0;
  std::uint64_t estimated_bytes = 0;  // 4-byte hub + 2-byte distance per entry
};

/// Exact 2-hop distance labels; each vertex's list is sorted by hub id.
class HubLabeling {
 public:
  static constexpr std::size_t kEntryBytes = 6;

  HubLabeling() = default;
  HubLabeling(std::vector<std::vector<LabelEntry>> labels, std::vector<VertexId> order)
      : labels_(std::move(labels)), order_(std::move(order)) {}

  std::size_t num_vertices() const { return labels_.size(); }
  const std::vector<LabelEntry>& label(VertexId v) const { return labels_[v]; }
  const std::vector<VertexId>& order() const { return order_; }

  /// Minimum of d(s,h) + d(h,t) over common hubs, by merge scan.
  Distance query(VertexId s, VertexId t) const {
    if (s >= labels_.size() || t >= labels_.size()) throw Error("oracle query: vertex out of range");
    const auto& a = labels_[s];
    const auto& b = labels_[t];
    Distance best = kUnreached;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].hub < b[j].hub) {
        ++i;
      } else if (a[i].hub > b[j].hub) {
        ++j;
      } else {
        best = std::min(best, a[i].dist + b[j].dist);
        ++i;
        ++j;
      }
    }
    return best;
  }

  LabelStats stats() const {
    LabelStats s;
    for (const auto& l : labels_) {
      s.total_entries += l.size();
      s.max_label_size = std::max(s.max_label_size, l.size());
    }
    s.avg_label_size = labels_.empty() ? 0.0 : static_cast<double>(s.total_entries) / static_cast<double>(labels_.size());
    s.estimated_bytes = s.total_entries * kEntryBytes;
    return s;
  }

  /*
   * Binary layout, little-endian: "PLL1", n (u32), total entries (u64), then
   * for each vertex an entry count (u32) followed by (hub u32, distance u16)
   * pairs in ascending hub order. The build order is not stored.
   */
  void save(std::ostream& out) const {
    out.write("PLL1", 4);
    put(out, static_cast<std::uint32_t>(labels_.size()), 4);
    put(out, stats().total_entries, 8);
    for (const auto& l : labels_) {
      put(out, static_cast<std::uint32_t>(l.size()), 4);
      for (const auto& e : l) {
        if (e.dist > std::numeric_limits<std::uint16_t>::max()) throw Error("label file: distance exceeds 16 bits");
        put(out, e.hub, 4);
        put(out, e.dist, 2);
      }
    }
    if (!out) throw Error("label file: write failed");
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("label file: cannot write " + path);
    save(out);
  }

  static HubLabeling load(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "PLL1", 4) != 0) throw Error("label file: bad magic");
    const auto n = static_cast<std::uint32_t>(get(in, 4));
    const std::uint64_t total = get(in, 8);
    std::vector<std::vector<LabelEntry>> labels(n);
    std::uint64_t seen = 0;
    for (auto& l : labels) {
      auto count = static_cast<std::uint32_t>(get(in, 4));
      seen += count;
      if (seen > total) throw Error("label file: entry count mismatch");
      l.resize(count);
      for (auto& e : l) {
        e.hub = static_cast<VertexId>(get(in, 4));
        e.dist = static_cast<Distance>(get(in, 2));
        if (e.hub >= n) throw Error("label file: hub out of range");
      }
    }
    if (seen != total) throw Error("label file: entry count mismatch");
    return HubLabeling(std::move(labels), {});
  }

  static HubLabeling load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("label file: cannot open " + path);
    return load(in);
  }

  friend bool operator==(const HubLabeling& a, const HubLabeling& b) { return a.labels_ == b.labels_; }

 private:
  static void put(std::ostream& out, std::uint64_t v, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, bytes);
  }
  static std::uint64_t get(std::istream& in, int bytes) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), bytes)) throw Error("label file: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }

  std::vector<std::vector<LabelEntry>> labels_;
  std::vector<VertexId> order_;
};

/// Decreasing degree, lowest id first among equals.
inline std::vector<VertexId> degree_order(const Graph& g) {
  std::vector<VertexId> order(g.num_vertices());
  for (VertexId v = 0; v < order.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });
  return order;
}

/*
 * Pruned landmark labeling, one root at a time. While roots are being added
 * the labels hold hub ranks, which grow with insertion, so every list stays
 * sorted without extra work; snapshot() and finish() translate ranks back to
 * vertex ids. A BFS from root r stops expanding at v when the labels built so
 * far already give a distance <= d(r, v).
 */
class LabelBuilder {
 public:
  explicit LabelBuilder(const Graph& g, std::optional<std::vector<VertexId>> order = std::nullopt, bool prune = true)
      : g_(&g),
        order_(order ? std::move(*order) : degree_order(g)),
        prune_(prune),
        labels_(g.num_vertices()),
        root_dist_(g.num_vertices(), kUnreached),
        dist_(g.num_vertices(), kUnreached) {
    if (order_.size() != g.num_vertices()) throw Error("build_labels: order must list every vertex once");
    std::vector<bool> seen(g.num_vertices(), false);
    for (VertexId v : order_) {
      if (v >= g.num_vertices() || seen[v]) throw Error("build_labels: order must list every vertex once");
      seen[v] = true;
    }
  }

  std::size_t processed() const { return next_; }
  bool done() const { return next_ == order_.size(); }

  /// Adds the next root; returns false when none is left.
  bool step() {
    if (done()) return false;
    const auto rank = static_cast<VertexId>(next_++);
    const VertexId root = order_[rank];
    for (const auto& e : labels_[root]) root_dist_[e.hub] = e.dist;

    queue_.clear();
    queue_.push_back(root);
    dist_[root] = 0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      VertexId v = queue_[head];
      Distance d = dist_[v];
      if (prune_ && covered(v, d)) continue;
      labels_[v].push_back({rank, d});
      for (VertexId w : g_->neighbors(v))
        if (dist_[w] == kUnreached) {
          dist_[w] = d + 1;
          queue_.push_back(w);
        }
    }
    for (VertexId v : queue_) dist_[v] = kUnreached;
    for (const auto& e : labels_[root]) root_dist_[e.hub] = kUnreached;
    return true;
  }

  /// Labeling of the roots processed so far.
  HubLabeling snapshot() const {
    std::vector<std::vector<LabelEntry>> out(labels_.size());
    for (std::size_t v = 0; v < labels_.size(); ++v) {
      out[v].reserve(labels_[v].size());
      for (const auto& e : labels_[v]) out[v].push_back({order_[e.hub], e.dist});
      std::sort(out[v].begin(), out[v].end(), [](const LabelEntry& a, const LabelEntry& b) { return a.hub < b.hub; });
    }
    return HubLabeling(std::move(out), std::vector<VertexId>(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(next_)));
  }

  HubLabeling finish() {
    while (step()) {
    }
    return snapshot();
  }

 private:
  bool covered(VertexId v, Distance d) const {
    for (const auto& e : labels_[v]) {
      Distance r = root_dist_[e.hub];
      if (r != kUnreached && r + e.dist <= d) return true;
    }
    return false;
  }

  const Graph* g_;
  std::vector<VertexId> order_;
  bool prune_;
  std::vector<std::vector<LabelEntry>> labels_;  // hub stored as rank during the build
  std::vector<Distance> root_dist_;              // indexed by rank
  std::vector<Distance> dist_;
  std::vector<VertexId> queue_;
  std::size_t next_ = 0;
};

inline HubLabeling build_labels(const Graph& g, std::optional<std::vector<VertexId>> order = std::nullopt, bool prune = true) {
  return LabelBuilder(g, std::move(order), prune).finish();
}

inline Distance query(const HubLabeling& labels, VertexId s, VertexId t) { return labels.query(s, t); }

inline LabelStats label_stats(const HubLabeling& labels) { return labels.stats(); }

}  // namespace mgraph
