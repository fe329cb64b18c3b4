#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diglab/ball.hpp"
#include "diglab/degree_law.hpp"
#include "diglab/digraph.hpp"
#include "diglab/rng.hpp"
#include "diglab/scc.hpp"
#include "diglab/signature.hpp"

namespace diglab {

/// Empirical distribution of ball signatures. Counts are kept integral;
/// frequencies are counts / normalizer, where the normalizer can exceed the
/// tallied population (split censuses are normalized by n, not part size).
struct Census {
  std::size_t radius = 0;
  std::map<std::string, std::uint64_t> counts;  // signature -> occurrences
  std::uint64_t normalizer = 0;
  std::uint64_t sample_size = 0;
  std::string population = "all";  // all | giant | complement | bp-limit
  std::uint64_t exact_signatures = 0;

  double freq(const std::string& sig) const {
    auto it = counts.find(sig);
    return it == counts.end() ? 0.0
                              : static_cast<double>(it->second) / normalizer;
  }
  double total_mass() const {
    std::uint64_t t = 0;
    for (const auto& [sig, c] : counts) t += c;
    return normalizer ? static_cast<double>(t) / normalizer : 0.0;
  }
  double exact_share() const {
    return sample_size
               ? static_cast<double>(exact_signatures) / sample_size
               : 1.0;
  }
};

/// Ball census over all vertices, or over a uniform sample without
/// replacement. A sample request larger than n is clamped to all.
inline Census census(const Digraph& g, std::size_t r, std::size_t sample,
                     std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> vertices;
  if (sample == 0 || sample >= n) {
    vertices.resize(n);
    for (Vertex v = 0; v < n; ++v) vertices[v] = v;
  } else {
    std::vector<Vertex> all(n);
    for (Vertex v = 0; v < n; ++v) all[v] = v;
    Rng rng(seed);
    for (std::size_t i = 0; i < sample; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
      std::swap(all[i], all[j]);
    }
    vertices.assign(all.begin(), all.begin() + sample);
  }

  Census c;
  c.radius = r;
  c.population = "all";
  c.sample_size = vertices.size();
  c.normalizer = vertices.size();
  for (Vertex v : vertices) {
    BallSignature sig = canonical_signature(extract_ball(g, v, r));
    ++c.counts[sig.bytes];
    if (sig.exact) ++c.exact_signatures;
  }
  return c;
}

/// Censuses of the giant and its complement, both normalized by n, so the
/// giant census carries total mass |C_max|/n and the two add up,
/// signature-wise, to the full census.
inline std::pair<Census, Census> census_split(const Digraph& g,
                                              const SccDecomposition& scc,
                                              std::size_t r) {
  const std::size_t n = g.num_vertices();
  const std::uint32_t giant = scc.largest();
  Census in_giant, complement;
  in_giant.radius = complement.radius = r;
  in_giant.population = "giant";
  complement.population = "complement";
  in_giant.normalizer = complement.normalizer = n;
  for (Vertex v = 0; v < n; ++v) {
    BallSignature sig = canonical_signature(extract_ball(g, v, r));
    Census& c = scc.comp_of[v] == giant ? in_giant : complement;
    ++c.counts[sig.bytes];
    ++c.sample_size;
    if (sig.exact) ++c.exact_signatures;
  }
  return {std::move(in_giant), std::move(complement)};
}

inline double tv_distance(const Census& a, const Census& b) {
  if (a.radius != b.radius)
    throw std::invalid_argument("tv_distance: radius mismatch");
  double total = 0;
  for (const auto& [sig, count] : a.counts)
    total += std::abs(static_cast<double>(count) / a.normalizer - b.freq(sig));
  for (const auto& [sig, count] : b.counts)
    if (!a.counts.count(sig))
      total += static_cast<double>(count) / b.normalizer;
  return total / 2.0;
}

/// Census of the limit object: independent forward-backward trees sharing
/// only the root. The root degree pair comes from the law itself; deeper
/// generations use the size-biased offspring laws. Any tree hitting the node
/// cap is tallied in its own "saturated" bucket.
inline Census simulate_limit_census(const DegreeLaw& law, std::size_t r,
                                    std::size_t replicates, std::uint64_t seed,
                                    std::size_t node_cap = 1000000) {
  if (r < 1) throw std::invalid_argument("simulate_limit_census: r >= 1");
  if (law.mean_in() <= 0 || law.mean_out() <= 0)
    throw std::invalid_argument("simulate_limit_census: degenerate law");
  const std::vector<double> fwd_offspring = law.forward_offspring();
  const std::vector<double> bwd_offspring = law.backward_offspring();
  static const std::string kSaturated = "SATURATED";

  Census c;
  c.radius = r;
  c.population = "bp-limit";
  c.normalizer = replicates;
  c.sample_size = replicates;

  Rng rng(seed);
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    auto [root_in, root_out] = law.sample(rng);
    RootedBall ball;
    ball.radius = r;
    std::size_t next_id = 1;
    bool saturated = false;

    // depth-limited growth of one tree; edges oriented by `forward`
    auto grow = [&](bool forward, std::uint32_t root_children) {
      std::vector<std::pair<std::uint32_t, std::size_t>> queue;  // node, depth
      auto spawn = [&](std::uint32_t parent, std::size_t depth,
                       std::uint32_t count) {
        for (std::uint32_t i = 0; i < count; ++i) {
          if (next_id > node_cap) {
            saturated = true;
            return;
          }
          std::uint32_t child = static_cast<std::uint32_t>(next_id++);
          if (forward)
            ball.edges.emplace_back(parent, child);
          else
            ball.edges.emplace_back(child, parent);
          queue.emplace_back(child, depth);
        }
      };
      if (r >= 2) spawn(0, 1, root_children);
      for (std::size_t h = 0; h < queue.size() && !saturated; ++h) {
        auto [node, depth] = queue[h];
        if (depth + 1 >= r) continue;
        std::uint32_t kids = static_cast<std::uint32_t>(detail::sample_pmf(
            forward ? fwd_offspring : bwd_offspring, rng));
        spawn(node, depth + 1, kids);
      }
    };
    grow(true, root_out);
    grow(false, root_in);

    if (saturated) {
      ++c.counts[kSaturated];
      continue;
    }
    ball.num_vertices = next_id;
    std::sort(ball.edges.begin(), ball.edges.end());
    BallSignature sig = canonical_signature(ball);
    ++c.counts[sig.bytes];
    if (sig.exact) ++c.exact_signatures;
  }
  return c;
}

}  // namespace diglab
