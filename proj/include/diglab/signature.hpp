#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "diglab/ball.hpp"

namespace diglab {

/// Canonical isomorphism-invariant encoding of a rooted ball. Balls up to
/// the exact cap get a true canonical form (exact = true): isomorphic balls
/// produce identical strings and non-isomorphic ones distinct strings.
/// Larger balls get an iterated color-refinement hash (exact = false), with
/// an astronomically small collision probability.
struct BallSignature {
  std::string bytes;
  bool exact = false;
};

namespace detail {

constexpr std::size_t kExactCanonCap = 24;

struct BallMatrix {
  std::size_t n = 0;
  std::vector<std::uint16_t> counts;  // row-major multiplicities

  explicit BallMatrix(const RootedBall& ball)
      : n(ball.num_vertices), counts(ball.num_vertices * ball.num_vertices, 0) {
    for (auto [u, v] : ball.edges) ++counts[u * n + v];
  }
  std::uint16_t at(std::size_t u, std::size_t v) const {
    return counts[u * n + v];
  }
};

using ColorVec = std::vector<std::uint32_t>;

/// One full color-refinement pass to a fixed point. The refined color of a
/// vertex is determined by its current color plus the multisets of
/// (multiplicity, neighbor color) over out- and in-edges; new ids are
/// assigned in sorted key order, which keeps them isomorphism-invariant.
inline ColorVec refine_colors(const BallMatrix& a, ColorVec colors) {
  using Key = std::tuple<std::uint32_t,
                         std::vector<std::pair<std::uint16_t, std::uint32_t>>,
                         std::vector<std::pair<std::uint16_t, std::uint32_t>>>;
  const std::size_t n = a.n;
  std::size_t num_colors =
      n ? *std::max_element(colors.begin(), colors.end()) + 1 : 0;
  while (true) {
    std::map<Key, std::uint32_t> ids;
    std::vector<Key> keys(n);
    for (std::size_t v = 0; v < n; ++v) {
      auto& [self, outs, ins] = keys[v];
      self = colors[v];
      for (std::size_t w = 0; w < n; ++w) {
        if (a.at(v, w)) outs.emplace_back(a.at(v, w), colors[w]);
        if (a.at(w, v)) ins.emplace_back(a.at(w, v), colors[w]);
      }
      std::sort(outs.begin(), outs.end());
      std::sort(ins.begin(), ins.end());
      ids.emplace(keys[v], 0);
    }
    std::uint32_t next = 0;
    for (auto& [key, id] : ids) id = next++;
    ColorVec refined(n);
    for (std::size_t v = 0; v < n; ++v) refined[v] = ids[keys[v]];
    if (next == num_colors) return refined;
    num_colors = next;
    colors = std::move(refined);
  }
}

inline std::string encode_discrete(const BallMatrix& a, const ColorVec& colors) {
  const std::size_t n = a.n;
  std::vector<std::uint32_t> order(n);
  for (std::size_t v = 0; v < n; ++v) order[colors[v]] = static_cast<std::uint32_t>(v);
  std::string s;
  s.reserve(2 + 2 * n * n);
  s.push_back(static_cast<char>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::uint16_t c = a.at(order[i], order[j]);
      s.push_back(static_cast<char>(c & 0xff));
      s.push_back(static_cast<char>(c >> 8));
    }
  return s;
}

/// True when the transposition (u v) is an automorphism of the count
/// matrix; individualizing either vertex then yields the same canonical
/// encoding, so the search only needs one of them.
inline bool twins(const BallMatrix& a, std::size_t u, std::size_t v) {
  if (a.at(u, u) != a.at(v, v) || a.at(u, v) != a.at(v, u)) return false;
  for (std::size_t w = 0; w < a.n; ++w) {
    if (w == u || w == v) continue;
    if (a.at(u, w) != a.at(v, w) || a.at(w, u) != a.at(w, v)) return false;
  }
  return true;
}

/// Individualization-refinement search: branch on the vertices of the first
/// non-singleton color class (skipping twins of already-expanded branches)
/// and keep the lexicographically smallest encoding. Exhaustive over
/// distinct branches, hence canonical.
inline std::string canonical_search(const BallMatrix& a, ColorVec colors) {
  colors = refine_colors(a, std::move(colors));
  const std::size_t n = a.n;

  std::uint32_t split_color = UINT32_MAX;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t count = 0;
    for (std::size_t w = 0; w < n; ++w)
      if (colors[w] == colors[v]) ++count;
    if (count > 1 && colors[v] < split_color) split_color = colors[v];
  }
  if (split_color == UINT32_MAX) return encode_discrete(a, colors);

  std::uint32_t fresh =
      *std::max_element(colors.begin(), colors.end()) + 1;
  std::string best;
  std::vector<std::size_t> expanded;
  for (std::size_t v = 0; v < n; ++v) {
    if (colors[v] != split_color) continue;
    bool duplicate = false;
    for (std::size_t u : expanded)
      if (twins(a, u, v)) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    expanded.push_back(v);
    ColorVec branch = colors;
    branch[v] = fresh;
    std::string cand = canonical_search(a, std::move(branch));
    if (best.empty() || cand < best) best = std::move(cand);
  }
  return best;
}

inline std::uint64_t fnv1a(std::uint64_t h, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) {
    h ^= (x >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string refinement_hash(const RootedBall& ball) {
  const std::size_t n = ball.num_vertices;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out(n),
      in(n);
  {
    std::size_t i = 0;
    while (i < ball.edges.size()) {  // edges are sorted; run-length multi-edges
      auto [u, v] = ball.edges[i];
      std::uint32_t mult = 0;
      while (i < ball.edges.size() && ball.edges[i] == std::make_pair(u, v)) {
        ++mult;
        ++i;
      }
      out[u].emplace_back(v, mult);
      in[v].emplace_back(u, mult);
    }
  }
  std::vector<std::uint64_t> color(n, 0x9e3779b97f4a7c15ULL);
  color[0] = 0xd1b54a32d192ed03ULL;  // root distinguished
  const std::size_t rounds = 3 * 2 * ball.radius + 1;
  std::vector<std::uint64_t> next(n);
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::uint64_t> outs, ins;
      for (auto [w, mult] : out[v])
        outs.push_back(fnv1a(color[w], mult));
      for (auto [w, mult] : in[v])
        ins.push_back(fnv1a(color[w], mult));
      std::sort(outs.begin(), outs.end());
      std::sort(ins.begin(), ins.end());
      std::uint64_t h = fnv1a(0xcbf29ce484222325ULL, color[v]);
      for (std::uint64_t x : outs) h = fnv1a(h, x);
      h = fnv1a(h, 0x517cc1b727220a95ULL);
      for (std::uint64_t x : ins) h = fnv1a(h, x);
      next[v] = h;
    }
    color.swap(next);
  }
  std::vector<std::uint64_t> sorted(color.begin() + 1, color.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = fnv1a(0xcbf29ce484222325ULL, n);
  h = fnv1a(h, ball.edges.size());
  h = fnv1a(h, color[0]);
  for (std::uint64_t x : sorted) h = fnv1a(h, x);
  std::string s;
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((h >> (8 * i)) & 0xff));
  return s;
}

}  // namespace detail

inline BallSignature canonical_signature(const RootedBall& ball) {
  BallSignature sig;
  if (ball.num_vertices <= detail::kExactCanonCap) {
    detail::BallMatrix a(ball);
    detail::ColorVec colors(ball.num_vertices, 1);
    if (!colors.empty()) colors[0] = 0;  // root fixed
    sig.bytes = "E" + detail::canonical_search(a, std::move(colors));
    sig.exact = true;
  } else {
    sig.bytes = "H" + detail::refinement_hash(ball);
    sig.exact = false;
  }
  return sig;
}

}  // namespace diglab
