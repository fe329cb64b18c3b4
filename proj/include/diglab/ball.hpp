#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "diglab/digraph.hpp"

namespace diglab {

/// Forward-backward r-ball: the subgraph induced by the vertices u with
/// min(d(u,v), d(v,u)) < r, rooted at v. Local ids, root = 0. Edge
/// multiplicities are preserved.
struct RootedBall {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // local ids
  std::size_t radius = 0;
  Vertex origin = 0;  // id in the host graph
};

inline RootedBall extract_ball(const Digraph& g, Vertex v, std::size_t r) {
  g.check_vertex(v);
  if (r < 1) throw std::invalid_argument("extract_ball: r >= 1");
  const std::size_t n = g.num_vertices();

  // Forward and backward BFS to depth r-1 (strict inequality in the
  // definition: r=1 keeps only the root).
  std::vector<std::uint32_t> local(n, UINT32_MAX);
  std::vector<Vertex> members{v};
  local[v] = 0;
  auto sweep = [&](bool forward) {
    std::vector<std::pair<Vertex, std::size_t>> queue{{v, 0}};
    std::vector<bool> seen(n, false);
    seen[v] = true;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      auto [u, dist] = queue[h];
      if (dist + 1 >= r) continue;
      const auto& adj = forward ? g.out_neighbors(u) : g.in_neighbors(u);
      for (Vertex w : adj) {
        if (seen[w]) continue;
        seen[w] = true;
        queue.emplace_back(w, dist + 1);
        if (local[w] == UINT32_MAX) {
          local[w] = static_cast<std::uint32_t>(members.size());
          members.push_back(w);
        }
      }
    }
  };
  sweep(true);
  sweep(false);

  RootedBall ball;
  ball.num_vertices = members.size();
  ball.radius = r;
  ball.origin = v;
  // Full induced edge set, multiplicity preserved.
  for (Vertex u : members)
    for (Vertex w : g.out_neighbors(u))
      if (local[w] != UINT32_MAX) ball.edges.emplace_back(local[u], local[w]);
  std::sort(ball.edges.begin(), ball.edges.end());
  return ball;
}

}  // namespace diglab
