#pragma once

#include <cstdint>
#include <random>

namespace selpred {

/// splitmix64 finalizer. Derives independent stream seeds from a master seed;
/// this is the documented mixing function behind per-trial reproducibility.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic random source: mt19937_64 with hand-pinned derivations
/// (no std::*_distribution), so a seed reproduces the same draws on any
/// platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform in [0,1) from the top 53 bits of one draw.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

  int bit() { return static_cast<int>(gen_() & 1u); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace selpred
