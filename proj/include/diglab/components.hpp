#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diglab/digraph.hpp"
#include "diglab/reach.hpp"
#include "diglab/rng.hpp"
#include "diglab/scc.hpp"

namespace diglab {

struct GiantStats {
  std::size_t n = 0;
  std::size_t size_lscc = 0;    // |C_max|
  std::size_t size_second = 0;  // |C_(2)|, 0 if fewer than 2 components
  std::size_t k_n = 0;          // number of SCCs
  double alpha1 = 0;            // fraction of strongly isolated vertices
  // |E(C_max)| under the degree-sum convention: half the total (in + out)
  // degree of C_max vertices, so an edge with one end outside counts 1/2.
  double giant_edge_count = 0;
  // (in_deg, out_deg) -> number of C_max vertices with that degree pair
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t>
      degree_census_in_giant;
};

inline GiantStats giant_stats(const Digraph& g, const SccDecomposition& scc) {
  GiantStats s;
  s.n = g.num_vertices();
  s.k_n = scc.num_components();
  std::uint32_t giant = scc.largest();
  s.size_lscc = scc.comp_sizes[giant];
  s.size_second =
      scc.comp_order.size() > 1 ? scc.comp_sizes[scc.comp_order[1]] : 0;

  std::size_t isolated = 0;
  for (std::uint32_t size : scc.comp_sizes)
    if (size == 1) ++isolated;
  s.alpha1 = s.n ? static_cast<double>(isolated) / s.n : 0.0;

  for (Vertex v = 0; v < s.n; ++v) {
    if (scc.comp_of[v] != giant) continue;
    ++s.degree_census_in_giant[{static_cast<std::uint32_t>(g.in_degree(v)),
                                static_cast<std::uint32_t>(g.out_degree(v))}];
    s.giant_edge_count += 0.5 * (g.in_degree(v) + g.out_degree(v));
  }
  return s;
}

namespace detail {

/// Per-component flags 1{|C-| >= k and |C+| >= k}, one capped forward +
/// one capped backward BFS per component representative (all vertices of a
/// component share their in-/out-component).
inline std::vector<bool> large_component_flags(const Digraph& g,
                                               const SccDecomposition& scc,
                                               std::size_t k) {
  const std::size_t nc = scc.num_components();
  std::vector<Vertex> rep(nc);
  for (Vertex v = g.num_vertices(); v-- > 0;) rep[scc.comp_of[v]] = v;
  std::vector<bool> flag(nc, false);
  for (std::size_t c = 0; c < nc; ++c) {
    if (scc.comp_sizes[c] >= k) {
      flag[c] = true;  // component alone already reaches the threshold
      continue;
    }
    auto fwd = forward_size_capped(g, rep[c], k);
    if (fwd.size < k) continue;
    auto bwd = backward_size_capped(g, rep[c], k);
    flag[c] = bwd.size >= k;
  }
  return flag;
}

}  // namespace detail

struct PairSampling {
  enum class Mode { Exact, MonteCarlo };
  Mode mode = Mode::Exact;
  std::size_t samples = 0;  // Monte Carlo only
  std::uint64_t seed = 0;

  static PairSampling exact() { return {Mode::Exact, 0, 0}; }
  static PairSampling monte_carlo(std::size_t samples, std::uint64_t seed) {
    return {Mode::MonteCarlo, samples, seed};
  }
};

struct ConditionCounters {
  std::size_t k = 0;
  std::size_t z_geq_k = 0;   // vertices with both components of size >= k
  double n_k = 0;            // ordered pairs, large components, different SCCs
  double n_k_2 = 0;          // same, but requiring no path x -> y
  double n_k_2_stderr = 0;   // 0 when exact
  bool estimate_mode = false;
};

/// Z_{>=k} and N^k via the identity
///   N^k = Z^2 - sum_i |C_(i)|^2 1{flagged},
/// both exact. N^k(2) is exact through the reachability closure when its
/// size limit permits, otherwise an unbiased Monte Carlo estimate over
/// uniformly sampled ordered vertex pairs.
inline ConditionCounters condition_counters(
    const Digraph& g, const SccDecomposition& scc, std::size_t k,
    PairSampling pairs = PairSampling::exact(),
    std::size_t closure_limit = ReachClosure::kDefaultLimit) {
  if (k < 1) throw std::invalid_argument("condition_counters: k >= 1");
  ConditionCounters out;
  out.k = k;

  const auto flag = detail::large_component_flags(g, scc, k);
  const std::size_t nc = scc.num_components();
  std::uint64_t z = 0, sq = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    if (!flag[c]) continue;
    z += scc.comp_sizes[c];
    sq += static_cast<std::uint64_t>(scc.comp_sizes[c]) * scc.comp_sizes[c];
  }
  out.z_geq_k = z;
  out.n_k = static_cast<double>(z * z - sq);

  if (pairs.mode == PairSampling::Mode::Exact) {
    ReachClosure closure(scc, closure_limit);  // throws above the limit
    // N^k(2) = sum over flagged component pairs (c,d) with no path c -> d,
    // weighted by |C_c| * |C_d|. c == d contributes nothing (c reaches c).
    std::vector<std::uint32_t> flagged;
    for (std::size_t c = 0; c < nc; ++c)
      if (flag[c]) flagged.push_back(static_cast<std::uint32_t>(c));
    std::uint64_t count = 0;
    for (std::uint32_t c : flagged)
      for (std::uint32_t d : flagged)
        if (!closure.reaches(c, d))
          count += static_cast<std::uint64_t>(scc.comp_sizes[c]) *
                   scc.comp_sizes[d];
    out.n_k_2 = static_cast<double>(count);
    return out;
  }

  // Monte Carlo over ordered vertex pairs. Reachability between distinct
  // components is answered by BFS on the condensation, with O(1) shortcuts
  // for pairs touching the largest component.
  out.estimate_mode = true;
  const std::size_t n = g.num_vertices();
  const std::uint32_t giant = scc.largest();
  std::vector<bool> giant_desc(nc, false), giant_anc(nc, false);
  {
    std::vector<std::uint32_t> stack{giant};
    giant_desc[giant] = true;
    while (!stack.empty()) {
      std::uint32_t c = stack.back();
      stack.pop_back();
      for (std::uint32_t d : scc.condensation[c])
        if (!giant_desc[d]) {
          giant_desc[d] = true;
          stack.push_back(d);
        }
    }
    std::vector<std::vector<std::uint32_t>> rev(nc);
    for (std::uint32_t c = 0; c < nc; ++c)
      for (std::uint32_t d : scc.condensation[c]) rev[d].push_back(c);
    stack.assign(1, giant);
    giant_anc[giant] = true;
    while (!stack.empty()) {
      std::uint32_t c = stack.back();
      stack.pop_back();
      for (std::uint32_t d : rev[c])
        if (!giant_anc[d]) {
          giant_anc[d] = true;
          stack.push_back(d);
        }
    }
  }
  std::vector<std::uint32_t> mark(nc, 0);
  std::uint32_t stamp = 0;
  auto comp_reaches = [&](std::uint32_t from, std::uint32_t to) {
    if (from == to) return true;
    if (from == giant) return static_cast<bool>(giant_desc[to]);
    if (to == giant) return static_cast<bool>(giant_anc[from]);
    ++stamp;
    std::vector<std::uint32_t> stack{from};
    mark[from] = stamp;
    while (!stack.empty()) {
      std::uint32_t c = stack.back();
      stack.pop_back();
      for (std::uint32_t d : scc.condensation[c]) {
        if (d == to) return true;
        if (mark[d] != stamp) {
          mark[d] = stamp;
          stack.push_back(d);
        }
      }
    }
    return false;
  };

  Rng rng(pairs.seed);
  std::size_t hits = 0;
  const std::size_t samples = std::max<std::size_t>(pairs.samples, 1);
  for (std::size_t s = 0; s < samples; ++s) {
    Vertex x = static_cast<Vertex>(rng.uniform_below(n));
    Vertex y = static_cast<Vertex>(rng.uniform_below(n));
    std::uint32_t cx = scc.comp_of[x], cy = scc.comp_of[y];
    if (!flag[cx] || !flag[cy]) continue;
    if (!comp_reaches(cx, cy)) ++hits;
  }
  const double p = static_cast<double>(hits) / samples;
  const double n2 = static_cast<double>(n) * n;
  out.n_k_2 = n2 * p;
  out.n_k_2_stderr = n2 * std::sqrt(p * (1.0 - p) / samples);
  return out;
}

inline double empirical_zeta_hat(const Digraph& g, const SccDecomposition& scc,
                                 std::size_t k) {
  if (k < 1) throw std::invalid_argument("empirical_zeta_hat: k >= 1");
  const auto flag = detail::large_component_flags(g, scc, k);
  std::uint64_t z = 0;
  for (std::size_t c = 0; c < scc.num_components(); ++c)
    if (flag[c]) z += scc.comp_sizes[c];
  return static_cast<double>(z) / g.num_vertices();
}

// --- bow-tie ----------------------------------------------------------------

enum class BowTiePart : std::uint8_t {
  LSCC,
  IN,
  OUT,
  TENDRIL_IN,
  TENDRIL_OUT,
  TUBE,
  OTHER
};

struct BowTie {
  std::vector<BowTiePart> part_of;  // per vertex
  std::size_t count(BowTiePart p) const {
    std::size_t c = 0;
    for (BowTiePart q : part_of)
      if (q == p) ++c;
    return c;
  }
};

inline const char* bowtie_part_name(BowTiePart p) {
  switch (p) {
    case BowTiePart::LSCC: return "LSCC";
    case BowTiePart::IN: return "IN";
    case BowTiePart::OUT: return "OUT";
    case BowTiePart::TENDRIL_IN: return "TENDRIL_IN";
    case BowTiePart::TENDRIL_OUT: return "TENDRIL_OUT";
    case BowTiePart::TUBE: return "TUBE";
    case BowTiePart::OTHER: return "OTHER";
  }
  return "?";
}

inline BowTie bowtie(const Digraph& g, const SccDecomposition& scc) {
  const std::size_t n = g.num_vertices();
  const std::uint32_t giant = scc.largest();
  std::vector<bool> in_lscc(n, false), reach_fwd(n, false),
      reach_bwd(n, false);
  std::vector<Vertex> queue;

  for (Vertex v = 0; v < n; ++v)
    if (scc.comp_of[v] == giant) {
      in_lscc[v] = true;
      queue.push_back(v);
      reach_fwd[v] = true;
    }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (Vertex w : g.out_neighbors(queue[h]))
      if (!reach_fwd[w]) {
        reach_fwd[w] = true;
        queue.push_back(w);
      }
  queue.clear();
  for (Vertex v = 0; v < n; ++v)
    if (in_lscc[v]) {
      queue.push_back(v);
      reach_bwd[v] = true;
    }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (Vertex w : g.in_neighbors(queue[h]))
      if (!reach_bwd[w]) {
        reach_bwd[w] = true;
        queue.push_back(w);
      }

  BowTie bt;
  bt.part_of.assign(n, BowTiePart::OTHER);
  for (Vertex v = 0; v < n; ++v) {
    if (in_lscc[v]) bt.part_of[v] = BowTiePart::LSCC;
    else if (reach_bwd[v]) bt.part_of[v] = BowTiePart::IN;
    else if (reach_fwd[v]) bt.part_of[v] = BowTiePart::OUT;
  }

  // Forward from IN without crossing the LSCC, and backward from OUT
  // likewise: a residual vertex seen from both sides is on an IN -> OUT
  // path avoiding the LSCC (a tube).
  std::vector<bool> from_in(n, false), to_out(n, false);
  queue.clear();
  for (Vertex v = 0; v < n; ++v)
    if (bt.part_of[v] == BowTiePart::IN) {
      from_in[v] = true;
      queue.push_back(v);
    }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (Vertex w : g.out_neighbors(queue[h]))
      if (!from_in[w] && !in_lscc[w]) {
        from_in[w] = true;
        queue.push_back(w);
      }
  queue.clear();
  for (Vertex v = 0; v < n; ++v)
    if (bt.part_of[v] == BowTiePart::OUT) {
      to_out[v] = true;
      queue.push_back(v);
    }
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (Vertex w : g.in_neighbors(queue[h]))
      if (!to_out[w] && !in_lscc[w]) {
        to_out[w] = true;
        queue.push_back(w);
      }

  for (Vertex v = 0; v < n; ++v) {
    if (bt.part_of[v] != BowTiePart::OTHER) continue;
    if (from_in[v] && to_out[v]) bt.part_of[v] = BowTiePart::TUBE;
    else if (from_in[v]) bt.part_of[v] = BowTiePart::TENDRIL_IN;
    else if (to_out[v]) bt.part_of[v] = BowTiePart::TENDRIL_OUT;
  }
  return bt;
}

// --- weak components --------------------------------------------------------

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

struct WeakComponents {
  // Largest in-/out-component over all vertices; requires the reachability
  // closure, absent when the closure was refused.
  std::optional<std::size_t> i_max;
  std::optional<std::size_t> o_max;
  std::vector<std::uint32_t> undirected_comp_of;  // per vertex
  // Graham-Knuth-Motzkin class per vertex; absent without the closure.
  std::optional<std::vector<std::uint32_t>> gkm_comp_of;
};

namespace detail {

inline std::vector<std::uint32_t> canonical_labels(
    std::vector<std::size_t> roots) {
  std::vector<std::uint32_t> labels(roots.size());
  std::map<std::size_t, std::uint32_t> ids;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    auto [it, _] = ids.emplace(roots[i], static_cast<std::uint32_t>(ids.size()));
    labels[i] = it->second;
  }
  return labels;
}

}  // namespace detail

/// Undirected partition always; i_max/o_max and the GKM classes only when
/// the closure could be built (pass nullptr after a refusal).
inline WeakComponents weak_components(const Digraph& g,
                                      const SccDecomposition& scc,
                                      const ReachClosure* closure) {
  const std::size_t n = g.num_vertices();
  WeakComponents wc;

  detail::UnionFind uf(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.out_neighbors(u)) uf.unite(u, v);
  {
    std::vector<std::size_t> roots(n);
    for (Vertex v = 0; v < n; ++v) roots[v] = uf.find(v);
    wc.undirected_comp_of = detail::canonical_labels(std::move(roots));
  }

  if (!closure) return wc;
  const std::size_t nc = scc.num_components();
  std::size_t imax = 0, omax = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    imax = std::max(imax, closure->in_component_size(
                              static_cast<std::uint32_t>(c)));
    omax = std::max(omax, closure->out_component_size(
                              static_cast<std::uint32_t>(c)));
  }
  wc.i_max = imax;
  wc.o_max = omax;

  // GKM: join condensation nodes that are mutually unreachable, then take
  // the transitive closure via union-find.
  detail::UnionFind guf(nc);
  for (std::uint32_t c = 0; c < nc; ++c)
    for (std::uint32_t d = c + 1; d < nc; ++d)
      if (!closure->reaches(c, d) && !closure->reaches(d, c)) guf.unite(c, d);
  std::vector<std::size_t> roots(n);
  for (Vertex v = 0; v < n; ++v) roots[v] = guf.find(scc.comp_of[v]);
  wc.gkm_comp_of = detail::canonical_labels(std::move(roots));
  return wc;
}

}  // namespace diglab
