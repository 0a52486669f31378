#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mgraph/graph.hpp"

namespace mgraph {

// Edge-list text format: one "u v" pair per line, whitespace separated
// decimal ids, '#' starts a comment line, undirected.

namespace detail {

inline bool parse_id(std::string_view& line, std::uint64_t& out) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  line.remove_prefix(i);
  if (line.empty()) return false;
  auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), out);
  if (ec != std::errc() || ptr == line.data()) return false;
  line.remove_prefix(static_cast<std::size_t>(ptr - line.data()));
  return line.empty() || line.front() == ' ' || line.front() == '\t';
}

}  // namespace detail

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> read_edge_pairs(std::istream& in) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') continue;
    std::uint64_t u = 0, v = 0;
    if (!detail::parse_id(line, u) || !detail::parse_id(line, v) ||
        line.find_first_not_of(" \t") != std::string_view::npos)
      throw Error("edge list: malformed line " + std::to_string(line_no));
    pairs.emplace_back(u, v);
  }
  if (pairs.empty()) throw Error("edge list: empty graph");
  return pairs;
}

/// Loads an edge list; ids are remapped as in build_from_edges.
inline RemappedGraph load_edge_list(std::istream& in) { return build_from_edges(read_edge_pairs(in)); }

inline RemappedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("edge list: cannot open " + path);
  return load_edge_list(in);
}

/// Writes every edge once as "u v" with u < v, in increasing order.
inline void save_edge_list(const Graph& g, std::ostream& out) {
  out << "# undirected edge list: " << g.num_vertices() << " vertices, " << g.num_edges() << " edges\n";
  std::string buf;
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (VertexId v : g.neighbors(u)) {
      if (v < u) continue;
      buf.append(std::to_string(u)).push_back(' ');
      buf.append(std::to_string(v)).push_back('\n');
    }
    if (buf.size() > (1 << 16)) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("edge list: cannot write " + path);
  save_edge_list(g, out);
  if (!out) throw Error("edge list: write failed for " + path);
}

}  // namespace mgraph
