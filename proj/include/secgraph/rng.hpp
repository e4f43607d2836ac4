#pragma once

#include <cstdint>
#include <vector>

namespace secgraph {

// splitmix64 generator. Chosen over <random> engines with library
// distributions because its output is identical on every platform, which the
// byte-identical-serialization guarantees depend on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Unbiased uniform draw from [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1), 53-bit resolution.
  double unit();

  /// Deterministic sub-stream seed for (master, index). Distinct indices give
  /// independent streams, so repeated runs are reproducible per item.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t state_;
};

/// Fisher-Yates permutation of 0..n-1 under a fixed seed.
std::vector<std::uint32_t> seeded_permutation(std::uint32_t n, std::uint64_t seed);

}  // namespace secgraph
