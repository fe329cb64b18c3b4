#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "diglab/degree_law.hpp"
#include "diglab/rng.hpp"

namespace diglab {

/// Closed-form / fixed-point limits for a degree law with a tree-like local
/// limit: stub-extinction probabilities, survival probabilities, the
/// strong-giant fraction zeta, the SCC-count limit 1 - zeta, and the giant
/// edge density. The derivation is documented in THEORY.md.
struct LimitValues {
  DegreeLaw law;
  double q_minus = 1;  // backward stub-extinction probability
  double q_plus = 1;   // forward stub-extinction probability
  double eta_minus = 0;  // root-level survival of the backward tree
  double eta_plus = 0;   // root-level survival of the forward tree
  double zeta = 0;       // P(both components infinite)
  double scc_density_treelike = 1;  // 1 - zeta
  double giant_edge_density = 0;
  double solver_residual = 0;
};

namespace detail {

inline double pgf(const std::vector<double>& pmf, double s) {
  double value = 0, power = 1;
  for (double mass : pmf) {
    value += mass * power;
    power *= s;
  }
  return value;
}

inline double pgf_derivative(const std::vector<double>& pmf, double s) {
  double value = 0, power = 1;
  for (std::size_t k = 1; k < pmf.size(); ++k) {
    value += static_cast<double>(k) * pmf[k] * power;
    power *= s;
  }
  return value;
}

/// Smallest fixed point of the offspring pgf in [0,1]. An offspring mean at
/// or below 1 (with 1e-12 slack) forces q = 1 outright, so the solver never
/// converges to the trivial root from the wrong side.
inline double smallest_fixed_point(const std::vector<double>& pmf,
                                   double tol) {
  double mean = 0;
  for (std::size_t k = 1; k < pmf.size(); ++k) mean += k * pmf[k];
  if (mean <= 1.0 + 1e-12) return 1.0;

  double lo = 0.0, hi = 1.0 - tol;
  // pgf(s) - s is >= 0 at 0 and < 0 just below 1 in the supercritical case.
  if (pgf(pmf, hi) - hi >= 0) return 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (pgf(pmf, mid) - mid >= 0)
      lo = mid;
    else
      hi = mid;
  }
  double q = 0.5 * (lo + hi);
  for (int iter = 0; iter < 50; ++iter) {  // Newton polish
    double f = pgf(pmf, q) - q;
    double df = pgf_derivative(pmf, q) - 1.0;
    if (std::abs(df) < 1e-15) break;
    double step = f / df;
    q -= step;
    if (q < 0) q = 0;
    if (q > 1) q = 1;
    if (std::abs(step) < 1e-15) break;
  }
  return q;
}

}  // namespace detail

inline LimitValues solve_limits(const DegreeLaw& law, double tol = 1e-10) {
  if (!(tol > 0) || tol > 1e-6)
    throw std::invalid_argument("solve_limits: tol in (0, 1e-6]");
  law.validate();
  LimitValues lim{law};
  lim.q_plus = detail::smallest_fixed_point(law.forward_offspring(), tol);
  lim.q_minus = detail::smallest_fixed_point(law.backward_offspring(), tol);
  lim.solver_residual = std::max(
      std::abs(detail::pgf(law.forward_offspring(), lim.q_plus) - lim.q_plus),
      std::abs(detail::pgf(law.backward_offspring(), lim.q_minus) -
               lim.q_minus));

  double eta_plus = 0, eta_minus = 0, zeta = 0, edge = 0;
  for (const auto& a : law.support()) {
    const double surv_minus = 1.0 - std::pow(lim.q_minus, a.in_deg);
    const double surv_plus = 1.0 - std::pow(lim.q_plus, a.out_deg);
    eta_plus += a.mass * surv_plus;
    eta_minus += a.mass * surv_minus;
    zeta += a.mass * surv_minus * surv_plus;
    edge += a.mass * (a.in_deg + a.out_deg) * surv_minus * surv_plus;
  }
  lim.eta_plus = eta_plus;
  lim.eta_minus = eta_minus;
  lim.zeta = zeta;
  lim.scc_density_treelike = 1.0 - zeta;
  lim.giant_edge_density = edge / 2.0;
  return lim;
}

/// Tree-like-limit mass of {both components infinite, degree pair (l, m)}:
/// p(l,m) (1 - q_minus^l)(1 - q_plus^m).
inline double giant_degree_mass(const LimitValues& lim, std::uint32_t l,
                                std::uint32_t m) {
  return lim.law.mass(l, m) * (1.0 - std::pow(lim.q_minus, l)) *
         (1.0 - std::pow(lim.q_plus, m));
}

inline double giant_edge_density(const LimitValues& lim) {
  return lim.giant_edge_density;
}

struct ZetaProxy {
  double estimate = 0;
  double standard_error = 0;
};

/// Monte Carlo estimate of P(both branching-process trees reach >= k
/// nodes); trees are truncated at k nodes, so the cost per replicate is
/// O(k).
inline ZetaProxy zeta_geq_k_proxy(const DegreeLaw& law, std::size_t k,
                                  std::size_t replicates, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("zeta_geq_k_proxy: k >= 1");
  if (k == 1) return {1.0, 0.0};  // the root always counts
  const std::vector<double> fwd = law.forward_offspring();
  const std::vector<double> bwd = law.backward_offspring();
  Rng rng(seed);

  auto tree_reaches = [&](std::uint32_t root_children,
                          const std::vector<double>& offspring) {
    std::size_t total = 1;
    std::vector<std::uint32_t> pending{root_children};
    while (!pending.empty()) {
      std::uint32_t kids = pending.back();
      pending.pop_back();
      for (std::uint32_t i = 0; i < kids; ++i) {
        if (++total >= k) return true;
        pending.push_back(
            static_cast<std::uint32_t>(detail::sample_pmf(offspring, rng)));
      }
    }
    return total >= k;
  };

  std::size_t hits = 0;
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    auto [j, m] = law.sample(rng);
    if (tree_reaches(m, fwd) && tree_reaches(j, bwd)) ++hits;
  }
  double p = static_cast<double>(hits) / replicates;
  return {p, std::sqrt(p * (1.0 - p) / replicates)};
}

}  // namespace diglab
