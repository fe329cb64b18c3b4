#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace diglab {

/// SplitMix64 avalanche mix. Replicate streams are derived as
/// mix(base_seed + GOLDEN * (replicate_index + 1)), so sweeps parallelize
/// without shared RNG state. The constants are the standard SplitMix64 ones.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base_seed,
                                 std::uint64_t stream_index) {
  return splitmix64(base_seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1));
}

/// mt19937_64 wrapper with hand-rolled draws, so output is a pure function
/// of the seed rather than of the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, bound) by rejection on the top bits.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Knuth's product method; fine for the moderate means used here.
  std::uint64_t poisson(double lambda) {
    const double threshold = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > threshold);
    return k - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace diglab
