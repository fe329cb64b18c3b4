// Independent brute-force oracles used by the unit and acceptance suites.
// Everything here is deliberately naive; none of it shares code with the
// library paths it checks.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "diglab/digraph.hpp"
#include "diglab/rng.hpp"

namespace oracle {

using diglab::Digraph;
using diglab::Edge;
using diglab::Vertex;

/// Reflexive transitive closure by Floyd-Warshall.
inline std::vector<std::vector<bool>> floyd_warshall(const Digraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (Vertex u = 0; u < n; ++u) {
    reach[u][u] = true;
    for (Vertex v : g.out_neighbors(u)) reach[u][v] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

/// Pairwise-reachability component relation: u ~ v iff mutually reachable.
inline std::vector<std::vector<bool>> component_relation(
    const std::vector<std::vector<bool>>& reach) {
  const std::size_t n = reach.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) rel[u][v] = reach[u][v] && reach[v][u];
  return rel;
}

inline std::size_t out_size(const std::vector<std::vector<bool>>& reach,
                            Vertex v) {
  return static_cast<std::size_t>(
      std::count(reach[v].begin(), reach[v].end(), true));
}

inline std::size_t in_size(const std::vector<std::vector<bool>>& reach,
                           Vertex v) {
  std::size_t c = 0;
  for (std::size_t u = 0; u < reach.size(); ++u)
    if (reach[u][v]) ++c;
  return c;
}

struct PairCounts {
  std::uint64_t n_k = 0;    // large components, different SCCs
  std::uint64_t n_k_2 = 0;  // large components, no path x -> y
};

inline PairCounts brute_pair_counts(const Digraph& g, std::size_t k) {
  const auto reach = floyd_warshall(g);
  const std::size_t n = g.num_vertices();
  std::vector<bool> large(n);
  for (Vertex v = 0; v < n; ++v)
    large[v] = in_size(reach, v) >= k && out_size(reach, v) >= k;
  PairCounts counts;
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < n; ++y) {
      if (!large[x] || !large[y]) continue;
      if (!(reach[x][y] && reach[y][x])) ++counts.n_k;
      if (!reach[x][y]) ++counts.n_k_2;
    }
  return counts;
}

/// Random multigraph-free digraphs for property tests (self-loops allowed).
inline Digraph random_digraph(std::size_t n, std::size_t m,
                              std::uint64_t seed) {
  diglab::Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    edges.emplace_back(static_cast<Vertex>(rng.uniform_below(n)),
                       static_cast<Vertex>(rng.uniform_below(n)));
  return Digraph(n, std::move(edges));
}

/// Brute-force forward-backward ball vertex set: all u with
/// min(d(u,v), d(v,u)) < r, by full BFS distance computation.
inline std::set<Vertex> brute_ball_vertices(const Digraph& g, Vertex v,
                                            std::size_t r) {
  const std::size_t n = g.num_vertices();
  auto bfs_dist = [&](Vertex s, bool forward) {
    std::vector<std::size_t> dist(n, SIZE_MAX);
    std::vector<Vertex> queue{s};
    dist[s] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex u = queue[h];
      const auto& adj = forward ? g.out_neighbors(u) : g.in_neighbors(u);
      for (Vertex w : adj)
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
    }
    return dist;
  };
  auto fwd = bfs_dist(v, true);   // d(v, u)
  auto bwd = bfs_dist(v, false);  // d(u, v)
  std::set<Vertex> ball;
  for (Vertex u = 0; u < n; ++u)
    if (std::min(fwd[u], bwd[u]) < r) ball.insert(u);
  return ball;
}

/// Rooted-digraph isomorphism by checking every root-fixing permutation of
/// labeled adjacency multisets.
inline bool rooted_isomorphic(std::size_t n,
                              const std::vector<Edge>& edges_a,
                              const std::vector<Edge>& edges_b) {
  if (edges_a.size() != edges_b.size()) return false;
  auto multiset = [&](const std::vector<Edge>& edges,
                      const std::vector<Vertex>& perm) {
    std::multiset<Edge> out;
    for (auto [u, v] : edges) out.insert({perm[u], perm[v]});
    return out;
  };
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::multiset<Edge> target(edges_b.begin(), edges_b.end());
  // root (vertex 0) stays fixed; permute the rest
  std::vector<Vertex> rest(perm.begin() + 1, perm.end());
  std::sort(rest.begin(), rest.end());
  do {
    std::vector<Vertex> p(n);
    p[0] = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) p[i + 1] = rest[i];
    if (multiset(edges_a, p) == target) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

}  // namespace oracle
