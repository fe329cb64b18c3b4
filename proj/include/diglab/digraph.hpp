#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace diglab {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable digraph with both adjacency directions. Multi-edges and
/// self-loops are retained; neighbor lists are sorted ascending so that
/// every traversal is deterministic.
class Digraph {
 public:
  Digraph() = default;

  Digraph(std::size_t n, std::vector<Edge> edges) : n_(n), m_(edges.size()) {
    out_.assign(n, {});
    in_.assign(n, {});
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) {
        throw std::invalid_argument("edge (" + std::to_string(u) + ", " +
                                    std::to_string(v) +
                                    ") out of range for n=" +
                                    std::to_string(n));
      }
      out_[u].push_back(v);
      in_[v].push_back(u);
    }
    for (auto& a : out_) std::sort(a.begin(), a.end());
    for (auto& a : in_) std::sort(a.begin(), a.end());
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return m_; }

  const std::vector<Vertex>& out_neighbors(Vertex v) const { return out_[v]; }
  const std::vector<Vertex>& in_neighbors(Vertex v) const { return in_[v]; }

  std::size_t out_degree(Vertex v) const { return out_[v].size(); }
  std::size_t in_degree(Vertex v) const { return in_[v].size(); }

  void check_vertex(Vertex v) const {
    if (v >= n_) {
      throw std::out_of_range("vertex " + std::to_string(v) +
                              " out of range for n=" + std::to_string(n_));
    }
  }

  Digraph transpose() const {
    std::vector<Edge> rev;
    rev.reserve(m_);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : out_[u]) rev.emplace_back(v, u);
    return Digraph(n_, std::move(rev));
  }

  /// Edges sorted by (u, v); multi-edges repeated.
  std::vector<Edge> sorted_edges() const {
    std::vector<Edge> es;
    es.reserve(m_);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : out_[u]) es.emplace_back(u, v);
    return es;  // out_ lists are sorted, so this is (u,v)-sorted already
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

inline Digraph build_digraph(std::size_t n, std::vector<Edge> edges) {
  return Digraph(n, std::move(edges));
}

// --- shared edge-list text format ------------------------------------------
// First line "n m", then m lines "u v". Lines starting with '#' are ignored.

inline void write_edge_list(std::ostream& os, const Digraph& g) {
  os << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.sorted_edges()) os << u << ' ' << v << '\n';
}

inline Digraph read_edge_list(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("edge list: empty input");
  std::istringstream head(line);
  std::size_t n = 0, m = 0;
  if (!(head >> n >> m)) throw std::runtime_error("edge list: bad header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!next_line())
      throw std::runtime_error("edge list: expected " + std::to_string(m) +
                               " edges, got " + std::to_string(i));
    std::istringstream row(line);
    std::uint64_t u = 0, v = 0;
    if (!(row >> u >> v))
      throw std::runtime_error("edge list: bad edge line: " + line);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return Digraph(n, std::move(edges));
}

}  // namespace diglab
