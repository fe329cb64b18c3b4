#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "diglab/components.hpp"
#include "diglab/generators.hpp"
#include "oracles.hpp"

using namespace diglab;

namespace {

std::uint64_t kn_by_reciprocal_sum(const SccDecomposition& scc) {
  // sum_v 1/|C_v| in exact arithmetic: vertices with |C_v| = s come in
  // groups of s, so the group counts must divide evenly.
  std::map<std::uint32_t, std::uint64_t> by_size;
  for (std::uint32_t c = 0; c < scc.num_components(); ++c)
    by_size[scc.comp_sizes[c]] += scc.comp_sizes[c];
  std::uint64_t total = 0;
  for (auto [size, vertices] : by_size) {
    REQUIRE(vertices % size == 0);
    total += vertices / size;
  }
  return total;
}

}  // namespace

TEST_CASE("giant_stats hand cases") {
  SECTION("directed path: DAG, all isolated") {
    Digraph g = fixture_directed_path(4);
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    CHECK(gs.k_n == 4);
    CHECK(gs.size_lscc == 1);
    CHECK(gs.alpha1 == 1.0);
  }
  SECTION("directed cycle") {
    Digraph g = fixture_directed_cycle(5);
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    CHECK(gs.k_n == 1);
    CHECK(gs.size_lscc == 5);
    CHECK(gs.alpha1 == 0.0);
    CHECK(gs.giant_edge_count == 5);
  }
  SECTION("boundary edges count half towards the giant edge count") {
    // 2-cycle {0,1} with a pendant edge 1 -> 2: degree sum in C_max is 5
    Digraph g = build_digraph(3, {{0, 1}, {1, 0}, {1, 2}});
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    CHECK(gs.size_lscc == 2);
    CHECK(gs.giant_edge_count == 2.5);
  }
  SECTION("scc-chain(3,2)") {
    Digraph g = fixture_scc_chain(3, 2);
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    CHECK(gs.k_n == 3);
    CHECK(gs.size_lscc == 2);
    CHECK(gs.size_second == 2);
    CHECK(gs.alpha1 == 0.0);
  }
  SECTION("a self-loop keeps a vertex strongly isolated") {
    Digraph g = build_digraph(2, {{0, 0}, {0, 1}});
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    CHECK(gs.alpha1 == 1.0);
  }
  SECTION("degree census totals the giant") {
    Digraph g = oracle::random_digraph(80, 200, 17);
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    std::size_t total = 0;
    for (auto& [deg, count] : gs.degree_census_in_giant) total += count;
    CHECK(total == gs.size_lscc);
  }
}

TEST_CASE("K_n identity holds exactly") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Digraph g = oracle::random_digraph(20 + seed % 180, 300, 8000 + seed);
    auto scc = scc_decompose(g);
    CHECK(kn_by_reciprocal_sum(scc) == scc.num_components());
  }
}

TEST_CASE("GiantStats structural bounds") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::size_t n = 20 + seed % 180;
    Digraph g = oracle::random_digraph(n, 2 * n, 8100 + seed);
    auto scc = scc_decompose(g);
    auto gs = giant_stats(g, scc);
    if (gs.size_lscc >= 2) CHECK(gs.alpha1 * n <= n - gs.size_lscc + 1e-6);
    CHECK(gs.k_n <= n - gs.size_lscc + 1);
  }
}

TEST_CASE("condition_counters hand cases") {
  SECTION("3-cycle, k=1") {
    Digraph g = fixture_directed_cycle(3);
    auto scc = scc_decompose(g);
    auto cc = condition_counters(g, scc, 1);
    CHECK(cc.z_geq_k == 3);
    CHECK(cc.n_k == 0);
    CHECK(cc.n_k_2 == 0);
  }
  SECTION("two disjoint 2-cycles, k=1") {
    Digraph g = build_digraph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    auto scc = scc_decompose(g);
    auto cc = condition_counters(g, scc, 1);
    CHECK(cc.z_geq_k == 4);
    CHECK(cc.n_k == 8);
    CHECK(cc.n_k_2 == 8);
  }
  SECTION("scc-chain(2,2), k=1: sandwich is tight") {
    Digraph g = fixture_scc_chain(2, 2);
    auto scc = scc_decompose(g);
    auto cc = condition_counters(g, scc, 1);
    CHECK(cc.z_geq_k == 4);
    CHECK(cc.n_k == 8);
    CHECK(cc.n_k_2 == 4);
    CHECK(cc.n_k == 2 * cc.n_k_2);
  }
}

TEST_CASE("N^k identity and sandwich vs brute force") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    std::size_t n = 10 + seed % 191;
    Digraph g = oracle::random_digraph(n, 2 * n, 9000 + seed);
    auto scc = scc_decompose(g);
    for (std::size_t k : {1, 2, 3, 5}) {
      auto cc = condition_counters(g, scc, k);
      auto brute = oracle::brute_pair_counts(g, k);
      REQUIRE(cc.n_k == static_cast<double>(brute.n_k));
      REQUIRE(cc.n_k_2 == static_cast<double>(brute.n_k_2));
      REQUIRE(cc.n_k_2 <= cc.n_k);
      REQUIRE(cc.n_k <= 2 * cc.n_k_2);
    }
  }
}

TEST_CASE("Z_geq_k is nonincreasing and Z_geq_1 = n") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::size_t n = 50 + seed * 10;
    Digraph g = oracle::random_digraph(n, 2 * n, 9100 + seed);
    auto scc = scc_decompose(g);
    std::size_t prev = SIZE_MAX;
    for (std::size_t k : {1, 2, 3, 5, 10, 20}) {
      auto cc = condition_counters(g, scc, k);
      if (k == 1) CHECK(cc.z_geq_k == n);
      CHECK(cc.z_geq_k <= prev);
      prev = cc.z_geq_k;
    }
  }
}

TEST_CASE("Monte Carlo N^k(2) estimator stays within 4 SE") {
  std::size_t failures = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Digraph g = oracle::random_digraph(120, 240, 9200 + seed);
    auto scc = scc_decompose(g);
    auto exact = condition_counters(g, scc, 2);
    for (std::uint64_t mc_seed = 0; mc_seed < 10; ++mc_seed, ++runs) {
      auto est = condition_counters(
          g, scc, 2, PairSampling::monte_carlo(20000, mc_seed));
      REQUIRE(est.estimate_mode);
      if (std::abs(est.n_k_2 - exact.n_k_2) > 4 * est.n_k_2_stderr + 1e-9)
        ++failures;
    }
  }
  CHECK(failures <= runs / 100 + 1);
}

TEST_CASE("empirical_zeta_hat hand cases") {
  CHECK(empirical_zeta_hat(fixture_directed_cycle(10),
                           scc_decompose(fixture_directed_cycle(10)),
                           5) == 1.0);
  Digraph path = fixture_directed_path(10);
  CHECK(empirical_zeta_hat(path, scc_decompose(path), 2) ==
        Catch::Approx(0.8));
}

TEST_CASE("bowtie hand cases") {
  SECTION("exemplar(2,3,2)") {
    Digraph g = fixture_bowtie_exemplar(2, 3, 2);
    auto scc = scc_decompose(g);
    auto bt = bowtie(g, scc);
    CHECK(bt.count(BowTiePart::IN) == 2);
    CHECK(bt.count(BowTiePart::LSCC) == 3);
    CHECK(bt.count(BowTiePart::OUT) == 2);
    CHECK(bt.count(BowTiePart::TUBE) == 0);
    CHECK(bt.count(BowTiePart::OTHER) == 0);
  }
  SECTION("cycle is all LSCC") {
    Digraph g = fixture_directed_cycle(5);
    auto bt = bowtie(g, scc_decompose(g));
    CHECK(bt.count(BowTiePart::LSCC) == 5);
  }
  SECTION("tube and tendrils") {
    // 0<->1 core; 2 -> core -> 3; 2 -> 4 -> 3 is a tube path; 2 -> 5 is a
    // tendril off IN; 6 -> 3 reaches OUT only.
    Digraph g = build_digraph(7, {{0, 1}, {1, 0}, {2, 0}, {1, 3},
                                  {2, 4}, {4, 3}, {2, 5}, {6, 3}});
    auto bt = bowtie(g, scc_decompose(g));
    CHECK(bt.part_of[2] == BowTiePart::IN);
    CHECK(bt.part_of[3] == BowTiePart::OUT);
    CHECK(bt.part_of[4] == BowTiePart::TUBE);
    CHECK(bt.part_of[5] == BowTiePart::TENDRIL_IN);
    CHECK(bt.part_of[6] == BowTiePart::TENDRIL_OUT);
  }
}

TEST_CASE("bowtie partition covers V and matches closure components") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::size_t n = 10 + seed % 91;
    Digraph g = oracle::random_digraph(n, 2 * n, 9300 + seed);
    auto scc = scc_decompose(g);
    auto bt = bowtie(g, scc);
    REQUIRE(bt.part_of.size() == n);
    auto reach = oracle::floyd_warshall(g);
    Vertex giant_rep = 0;
    for (Vertex v = 0; v < n; ++v)
      if (scc.comp_of[v] == scc.largest()) giant_rep = v;
    for (Vertex v = 0; v < n; ++v) {
      bool in_or_lscc = bt.part_of[v] == BowTiePart::IN ||
                        bt.part_of[v] == BowTiePart::LSCC;
      bool out_or_lscc = bt.part_of[v] == BowTiePart::OUT ||
                         bt.part_of[v] == BowTiePart::LSCC;
      REQUIRE(in_or_lscc == reach[v][giant_rep]);
      REQUIRE(out_or_lscc == reach[giant_rep][v]);
    }
  }
}

TEST_CASE("weak components hand cases") {
  SECTION("comparable path gives separate GKM classes") {
    Digraph g = build_digraph(2, {{0, 1}});
    auto scc = scc_decompose(g);
    ReachClosure rc(scc);
    auto wc = weak_components(g, scc, &rc);
    REQUIRE(wc.gkm_comp_of.has_value());
    CHECK((*wc.gkm_comp_of)[0] != (*wc.gkm_comp_of)[1]);
  }
  SECTION("one isolated vertex merges every GKM class") {
    Digraph g = build_digraph(3, {{0, 1}});
    auto scc = scc_decompose(g);
    ReachClosure rc(scc);
    auto wc = weak_components(g, scc, &rc);
    CHECK((*wc.gkm_comp_of)[0] == (*wc.gkm_comp_of)[1]);
    CHECK((*wc.gkm_comp_of)[1] == (*wc.gkm_comp_of)[2]);
  }
  SECTION("two disjoint 2-cycles: one GKM class, two undirected") {
    Digraph g = build_digraph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    auto scc = scc_decompose(g);
    ReachClosure rc(scc);
    auto wc = weak_components(g, scc, &rc);
    std::set<std::uint32_t> gkm(wc.gkm_comp_of->begin(),
                                wc.gkm_comp_of->end());
    CHECK(gkm.size() == 1);
    std::set<std::uint32_t> und(wc.undirected_comp_of.begin(),
                                wc.undirected_comp_of.end());
    CHECK(und.size() == 2);
  }
  SECTION("scc-chain(3,2) extremes") {
    Digraph g = fixture_scc_chain(3, 2);
    auto scc = scc_decompose(g);
    ReachClosure rc(scc);
    auto wc = weak_components(g, scc, &rc);
    CHECK(*wc.i_max == 6);
    CHECK(*wc.o_max == 6);
  }
  SECTION("undirected partition survives a closure refusal") {
    Digraph g = build_digraph(3, {{0, 1}});
    auto scc = scc_decompose(g);
    auto wc = weak_components(g, scc, nullptr);
    CHECK_FALSE(wc.i_max.has_value());
    CHECK_FALSE(wc.gkm_comp_of.has_value());
    std::set<std::uint32_t> und(wc.undirected_comp_of.begin(),
                                wc.undirected_comp_of.end());
    CHECK(und.size() == 2);
  }
}

TEST_CASE("GKM and undirected partitions coarsen the SCC partition") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    std::size_t n = 10 + seed % 191;
    Digraph g = oracle::random_digraph(n, 3 * n / 2, 9400 + seed);
    auto scc = scc_decompose(g);
    ReachClosure rc(scc);
    auto wc = weak_components(g, scc, &rc);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (scc.comp_of[u] == scc.comp_of[v]) {
          REQUIRE(wc.undirected_comp_of[u] == wc.undirected_comp_of[v]);
          REQUIRE((*wc.gkm_comp_of)[u] == (*wc.gkm_comp_of)[v]);
        }
  }
}
