#pragma once

#include <cstdint>

namespace safesched {

/// SplitMix64 (Steele, Lea, Flood 2014): the i-th output is a fixed mix of
/// seed + i * golden-gamma, so streams are reproducible on every platform.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64";

  explicit Rng(std::uint64_t seed = 0) noexcept : seed_(seed), state_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Top 53 bits scaled into [0,1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by rejection of the biased tail. n must be > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  /// Independent generator for a numbered sub-stream.
  Rng split(std::uint64_t stream) const noexcept {
    Rng mixer(seed_ ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
    return Rng(mixer.next());
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace safesched
