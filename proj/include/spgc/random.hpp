#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace spgc {

/// Seeded stream for the experiments. std::mt19937_64 is fully specified by
/// the standard; the bounded draw below is ours because the standard
/// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n): one 64-bit draw x, rejected while
  /// x >= n * floor((2^64 - 1) / n), then x mod n. Requires n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (n == 1 || x < limit) return x % n;
    }
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spgc
