#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diglab/degree_law.hpp"
#include "diglab/digraph.hpp"
#include "diglab/rng.hpp"

namespace diglab {

/// Directed Erdos-Renyi: each ordered pair (u,v), u != v, present
/// independently with probability lambda/n. Implemented by geometric
/// index-skipping over the n(n-1) ordered pairs, so expected cost is
/// O(lambda * n).
inline Digraph gen_directed_er(std::size_t n, double lambda,
                               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("er: n must be >= 1");
  if (lambda < 0 || lambda > static_cast<double>(n - 1))
    throw std::invalid_argument("er: need 0 <= lambda <= n-1 (p = lambda/n)");
  const double p = lambda / static_cast<double>(n);
  std::vector<Edge> edges;
  if (p > 0) {
    Rng rng(seed);
    edges.reserve(static_cast<std::size_t>(lambda * n * 1.1) + 16);
    const double log1mp = std::log1p(-p);
    const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1);
    std::uint64_t t = 0;
    while (true) {
      if (p < 1.0) {
        double u = rng.uniform01();
        // skip to the next present pair
        t += static_cast<std::uint64_t>(
            std::floor(std::log1p(-u) / log1mp));
      }
      if (t >= total) break;
      std::uint64_t u = t / (n - 1);
      std::uint64_t rem = t % (n - 1);
      std::uint64_t v = rem < u ? rem : rem + 1;
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
      ++t;
    }
  }
  return Digraph(n, std::move(edges));
}

/// Directed configuration model: uniform matching of out-stubs to in-stubs
/// via a Fisher-Yates shuffle of the in-stub multiset against the canonical
/// out-stub order. Self-loops and multi-edges are retained.
inline Digraph gen_directed_cm(const std::vector<std::uint32_t>& in_degrees,
                               const std::vector<std::uint32_t>& out_degrees,
                               std::uint64_t seed) {
  if (in_degrees.size() != out_degrees.size())
    throw std::invalid_argument("cm: degree lists differ in length");
  const std::size_t n = in_degrees.size();
  std::uint64_t in_sum = std::accumulate(in_degrees.begin(), in_degrees.end(),
                                         std::uint64_t{0});
  std::uint64_t out_sum = std::accumulate(out_degrees.begin(),
                                          out_degrees.end(), std::uint64_t{0});
  if (in_sum != out_sum)
    throw std::invalid_argument("cm: stub sums differ (in=" +
                                std::to_string(in_sum) +
                                ", out=" + std::to_string(out_sum) + ")");
  std::vector<Vertex> in_stubs;
  in_stubs.reserve(in_sum);
  for (Vertex v = 0; v < n; ++v)
    for (std::uint32_t i = 0; i < in_degrees[v]; ++i) in_stubs.push_back(v);
  Rng rng(seed);
  rng.shuffle(in_stubs);

  std::vector<Edge> edges;
  edges.reserve(in_sum);
  std::size_t pos = 0;
  for (Vertex u = 0; u < n; ++u)
    for (std::uint32_t i = 0; i < out_degrees[u]; ++i)
      edges.emplace_back(u, in_stubs[pos++]);
  return Digraph(n, std::move(edges));
}

/// Erases self-loops and collapses multi-edges; returns the number of
/// ordered pairs removed. For users studying the simple-graph DCM variant.
inline Digraph erase_to_simple(const Digraph& g, std::size_t* erased = nullptr) {
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& [u, v] : g.sorted_edges()) {
    if (u == v) continue;
    if (!edges.empty() && edges.back() == Edge{u, v}) continue;
    edges.emplace_back(u, v);
  }
  if (erased) *erased = g.num_edges() - edges.size();
  return Digraph(g.num_vertices(), std::move(edges));
}

struct DegreeSequence {
  std::vector<std::uint32_t> in_degrees;
  std::vector<std::uint32_t> out_degrees;
  std::size_t repair_count = 0;  // unit increments applied to equalize sums
};

/// n i.i.d. draws from the joint law. A stub-sum deficit is repaired by
/// incrementing the smaller side one unit at a time on uniformly re-chosen
/// vertices; the repair count is reported, never silent.
inline DegreeSequence sample_degree_sequence(const DegreeLaw& law,
                                             std::size_t n,
                                             std::uint64_t seed) {
  DegreeSequence seq;
  seq.in_degrees.resize(n);
  seq.out_degrees.resize(n);
  Rng rng(seed);
  std::int64_t diff = 0;  // in_sum - out_sum
  for (std::size_t v = 0; v < n; ++v) {
    auto [j, k] = law.sample(rng);
    seq.in_degrees[v] = j;
    seq.out_degrees[v] = k;
    diff += static_cast<std::int64_t>(j) - static_cast<std::int64_t>(k);
  }
  while (diff != 0) {
    std::size_t v = static_cast<std::size_t>(rng.uniform_below(n));
    if (diff < 0) {
      ++seq.in_degrees[v];
      ++diff;
    } else {
      ++seq.out_degrees[v];
      --diff;
    }
    ++seq.repair_count;
  }
  return seq;
}

// --- deterministic fixtures -------------------------------------------------

inline Digraph fixture_directed_cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v)
    edges.emplace_back(v, static_cast<Vertex>((v + 1) % n));
  return Digraph(n, std::move(edges));
}

inline Digraph fixture_directed_path(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Digraph(n, std::move(edges));
}

/// Complete DAG: edge u -> v for every u < v.
inline Digraph fixture_dag_complete(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Digraph(n, std::move(edges));
}

/// k strongly connected blobs (each a directed cycle of `blob` vertices)
/// linked by single edges blob_i -> blob_{i+1}.
inline Digraph fixture_scc_chain(std::size_t k, std::size_t blob) {
  if (k < 1 || blob < 1) throw std::invalid_argument("scc-chain: k, blob >= 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i) {
    Vertex base = static_cast<Vertex>(i * blob);
    if (blob > 1)
      for (Vertex v = 0; v < blob; ++v)
        edges.emplace_back(base + v, base + (v + 1) % blob);
    if (i + 1 < k)
      edges.emplace_back(base, static_cast<Vertex>((i + 1) * blob));
  }
  return Digraph(k * blob, std::move(edges));
}

/// IN set of a vertices each with an edge into a central directed cycle of
/// b vertices, which has edges out to an OUT set of c vertices.
inline Digraph fixture_bowtie_exemplar(std::size_t a, std::size_t b,
                                       std::size_t c) {
  if (b < 1) throw std::invalid_argument("bowtie-exemplar: core must be >= 1");
  std::vector<Edge> edges;
  Vertex core = static_cast<Vertex>(a);
  if (b > 1)
    for (Vertex v = 0; v < b; ++v)
      edges.emplace_back(core + v, core + (v + 1) % b);
  for (Vertex v = 0; v < a; ++v) edges.emplace_back(v, core);
  Vertex out = static_cast<Vertex>(a + b);
  for (Vertex v = 0; v < c; ++v) edges.emplace_back(core, out + v);
  return Digraph(a + b + c, std::move(edges));
}

inline Digraph fixture(const std::string& name,
                       const std::vector<std::size_t>& params) {
  auto need = [&](std::size_t count) {
    if (params.size() != count)
      throw std::invalid_argument("fixture " + name + ": expected " +
                                  std::to_string(count) + " parameters");
  };
  if (name == "scc-chain") {
    need(2);
    return fixture_scc_chain(params[0], params[1]);
  }
  if (name == "directed-cycle") {
    need(1);
    return fixture_directed_cycle(params[0]);
  }
  if (name == "directed-path") {
    need(1);
    return fixture_directed_path(params[0]);
  }
  if (name == "dag-complete") {
    need(1);
    return fixture_dag_complete(params[0]);
  }
  if (name == "bowtie-exemplar") {
    need(3);
    return fixture_bowtie_exemplar(params[0], params[1], params[2]);
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace diglab
