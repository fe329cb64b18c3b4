#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "diglab/digraph.hpp"

namespace diglab {

/// SCC partition of a digraph plus its condensation DAG. Component ids are
/// assigned in a topological order of the condensation (every condensation
/// edge goes from a lower id to a higher id).
struct SccDecomposition {
  std::vector<std::uint32_t> comp_of;          // vertex -> component id
  std::vector<std::uint32_t> comp_sizes;       // component id -> size
  std::vector<std::uint32_t> comp_order;       // ids by size desc, ties by
                                               // smallest contained vertex
  std::vector<std::vector<std::uint32_t>> condensation;  // deduplicated DAG

  std::size_t num_components() const { return comp_sizes.size(); }
  std::uint32_t largest() const { return comp_order[0]; }
};

/// Iterative Tarjan. Recursion is replaced by an explicit frame stack so the
/// decomposition works on long paths without exhausting the call stack.
inline SccDecomposition scc_decompose(const Digraph& g) {
  const std::size_t n = g.num_vertices();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  std::vector<std::uint32_t> comp_of(n, kUnset);
  std::uint32_t next_index = 0, next_comp = 0;

  struct Frame {
    Vertex v;
    std::size_t child;
  };
  std::vector<Frame> frames;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& adj = g.out_neighbors(f.v);
      if (f.child < adj.size()) {
        Vertex w = adj[f.child++];
        if (index[w] == kUnset) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          Vertex w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp_of[w] = next_comp;
          } while (w != f.v);
          ++next_comp;
        }
        Vertex done = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] =
              std::min(lowlink[frames.back().v], lowlink[done]);
      }
    }
  }

  // Tarjan emits components in reverse topological order; flip the ids.
  SccDecomposition scc;
  scc.comp_of.resize(n);
  for (Vertex v = 0; v < n; ++v) scc.comp_of[v] = next_comp - 1 - comp_of[v];

  scc.comp_sizes.assign(next_comp, 0);
  std::vector<Vertex> min_vertex(next_comp,
                                 std::numeric_limits<Vertex>::max());
  for (Vertex v = 0; v < n; ++v) {
    std::uint32_t c = scc.comp_of[v];
    ++scc.comp_sizes[c];
    min_vertex[c] = std::min(min_vertex[c], v);
  }

  scc.comp_order.resize(next_comp);
  std::iota(scc.comp_order.begin(), scc.comp_order.end(), 0u);
  std::sort(scc.comp_order.begin(), scc.comp_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (scc.comp_sizes[a] != scc.comp_sizes[b])
                return scc.comp_sizes[a] > scc.comp_sizes[b];
              return min_vertex[a] < min_vertex[b];
            });

  scc.condensation.assign(next_comp, {});
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : g.out_neighbors(u)) {
      std::uint32_t cu = scc.comp_of[u], cv = scc.comp_of[v];
      if (cu != cv) scc.condensation[cu].push_back(cv);
    }
  }
  for (auto& adj : scc.condensation) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return scc;
}

struct CappedSize {
  std::size_t size = 0;
  bool saturated = false;
};

namespace detail {

template <typename NeighborFn>
CappedSize bfs_capped(std::size_t n, Vertex start, std::size_t cap,
                      NeighborFn&& neighbors) {
  std::vector<bool> seen(n, false);
  std::vector<Vertex> queue{start};
  seen[start] = true;
  std::size_t count = 1, head = 0;
  while (head < queue.size()) {
    if (count >= cap) return {count, true};
    Vertex u = queue[head++];
    for (Vertex w : neighbors(u)) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        queue.push_back(w);
        if (count >= cap) return {count, true};
      }
    }
  }
  return {count, false};
}

}  // namespace detail

/// Size of the out-component of v, truncated: BFS halts once >= cap vertices
/// have been discovered and reports saturation instead of the exact size.
inline CappedSize forward_size_capped(const Digraph& g, Vertex v,
                                      std::size_t cap) {
  g.check_vertex(v);
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  return detail::bfs_capped(g.num_vertices(), v, cap,
                            [&](Vertex u) -> const std::vector<Vertex>& {
                              return g.out_neighbors(u);
                            });
}

inline CappedSize backward_size_capped(const Digraph& g, Vertex v,
                                       std::size_t cap) {
  g.check_vertex(v);
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  return detail::bfs_capped(g.num_vertices(), v, cap,
                            [&](Vertex u) -> const std::vector<Vertex>& {
                              return g.in_neighbors(u);
                            });
}

}  // namespace diglab
