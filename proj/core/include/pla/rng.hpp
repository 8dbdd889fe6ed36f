#ifndef PLA_RNG_HPP
#define PLA_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

namespace pla {

/// SplitMix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `(a, b)` under master seed `master`:
/// splitmix64(master ^ splitmix64(splitmix64(a) + b)).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  return splitmix64(master ^ splitmix64(splitmix64(a) + b));
}

/// 64-bit Mersenne Twister with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so uniform reals
/// and integers are produced here from the raw engine output. This keeps
/// traces byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pla

#endif  // PLA_RNG_HPP
