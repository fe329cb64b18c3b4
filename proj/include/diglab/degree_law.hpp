#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diglab/rng.hpp"

namespace diglab {
namespace detail {

/// CDF inversion over an explicit pmf indexed by value.
inline std::size_t sample_pmf(const std::vector<double>& pmf, Rng& rng) {
  double u = rng.uniform01();
  double cum = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    cum += pmf[k];
    if (u < cum) return k;
  }
  return pmf.empty() ? 0 : pmf.size() - 1;
}

}  // namespace detail

/// Joint limiting law of (in-degree, out-degree). Infinite-support laws
/// (poisson) are stored as an explicit support truncated at tail mass 1e-14;
/// the truncation point is recorded.
class DegreeLaw {
 public:
  enum class Kind { ExplicitJoint, Poisson, Regular };

  struct Atom {
    std::uint32_t in_deg;
    std::uint32_t out_deg;
    double mass;
  };

  static constexpr double kTailMass = 1e-14;

  static DegreeLaw poisson(double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("poisson: lambda must be > 0");
    // In- and out-degrees are independent Poisson(lambda); truncate each
    // marginal where its tail drops below kTailMass.
    std::vector<double> marginal;
    double mass = std::exp(-lambda);
    double cum = mass;
    marginal.push_back(mass);
    for (std::uint32_t k = 1; 1.0 - cum > kTailMass; ++k) {
      mass *= lambda / k;
      cum += mass;
      marginal.push_back(mass);
    }
    std::vector<Atom> support;
    support.reserve(marginal.size() * marginal.size());
    for (std::uint32_t j = 0; j < marginal.size(); ++j)
      for (std::uint32_t k = 0; k < marginal.size(); ++k)
        support.push_back({j, k, marginal[j] * marginal[k]});
    DegreeLaw law(Kind::Poisson, std::move(support));
    law.lambda_ = lambda;
    law.normalize();
    return law;
  }

  static DegreeLaw regular(std::uint32_t d) {
    return DegreeLaw(Kind::Regular, {{d, d, 1.0}});
  }

  static DegreeLaw explicit_joint(std::vector<Atom> support) {
    DegreeLaw law(Kind::ExplicitJoint, std::move(support));
    law.validate();
    return law;
  }

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  const std::vector<Atom>& support() const { return support_; }

  double mass(std::uint32_t j, std::uint32_t k) const {
    for (const Atom& a : support_)
      if (a.in_deg == j && a.out_deg == k) return a.mass;
    return 0.0;
  }

  double mean_in() const {
    double s = 0;
    for (const Atom& a : support_) s += a.mass * a.in_deg;
    return s;
  }
  double mean_out() const {
    double s = 0;
    for (const Atom& a : support_) s += a.mass * a.out_deg;
    return s;
  }

  /// Out-degree law of a vertex reached along a uniform in-stub:
  /// P(k) = sum_j j p(j,k) / E[D-]. Governs the forward exploration.
  std::vector<double> forward_offspring() const {
    return offspring(/*forward=*/true);
  }
  /// In-degree law along a uniform out-stub, for the backward exploration.
  std::vector<double> backward_offspring() const {
    return offspring(/*forward=*/false);
  }

  /// Draw one (in_deg, out_deg) pair by CDF inversion over the support.
  std::pair<std::uint32_t, std::uint32_t> sample(Rng& rng) const {
    double u = rng.uniform01();
    double cum = 0;
    for (const Atom& a : support_) {
      cum += a.mass;
      if (u < cum) return {a.in_deg, a.out_deg};
    }
    const Atom& last = support_.back();
    return {last.in_deg, last.out_deg};
  }

  void validate() const {
    double total = 0;
    for (const Atom& a : support_) {
      if (a.mass < 0) throw std::invalid_argument("degree law: negative mass");
      total += a.mass;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("degree law: masses sum to " +
                                  std::to_string(total) + ", expected 1");
    if (std::abs(mean_in() - mean_out()) > 1e-9)
      throw std::invalid_argument(
          "degree law: mean in-degree must equal mean out-degree");
  }

 private:
  DegreeLaw(Kind kind, std::vector<Atom> support)
      : kind_(kind), support_(std::move(support)) {}

  void normalize() {
    double total = 0;
    for (const Atom& a : support_) total += a.mass;
    for (Atom& a : support_) a.mass /= total;
  }

  std::vector<double> offspring(bool forward) const {
    double mean = forward ? mean_in() : mean_out();
    if (mean <= 0)
      throw std::invalid_argument("degree law: offspring law needs nonzero mean");
    std::vector<double> p;
    for (const Atom& a : support_) {
      std::uint32_t out = forward ? a.out_deg : a.in_deg;
      std::uint32_t weight = forward ? a.in_deg : a.out_deg;
      if (out >= p.size()) p.resize(out + 1, 0.0);
      p[out] += a.mass * weight / mean;
    }
    return p;
  }

  Kind kind_;
  std::vector<Atom> support_;
  double lambda_ = 0;
};

/// Parse "poisson:L" / "regular:D"; explicit laws come from JSON files and
/// are handled by the CLI layer.
inline DegreeLaw parse_degree_law(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("degree law: expected kind:param, got " + text);
  std::string kind = text.substr(0, colon);
  std::string param = text.substr(colon + 1);
  if (kind == "poisson") return DegreeLaw::poisson(std::stod(param));
  if (kind == "regular")
    return DegreeLaw::regular(static_cast<std::uint32_t>(std::stoul(param)));
  throw std::invalid_argument("degree law: unknown kind " + kind);
}

}  // namespace diglab
