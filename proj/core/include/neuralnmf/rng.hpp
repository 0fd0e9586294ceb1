#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nnmf {

/// Seeded random stream. Wraps std::mt19937_64 but does its own scaling so
/// the produced doubles are identical across standard libraries (the
/// distributions in <random> are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform index in [0, n). Rejection sampling, no modulo bias.
  std::size_t index(std::size_t n) {
    const std::uint64_t span = std::uint64_t{1} << 53;
    const std::uint64_t limit = span - span % static_cast<std::uint64_t>(n);
    std::uint64_t v;
    do {
      v = gen_() >> 11;
    } while (v >= limit);
    return static_cast<std::size_t>(v % static_cast<std::uint64_t>(n));
  }

  /// k distinct values from {0, ..., n-1}, returned sorted ascending.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

 private:
  std::mt19937_64 gen_;
};

}  // namespace nnmf
