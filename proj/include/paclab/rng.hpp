#pragma once

#include <cmath>
#include <cstdint>

namespace paclab {

/// SplitMix64 finalizer. Public-domain mixing function; every generator in
/// this project is a pure function of (seed, stream, counter) built on top of
/// it, so any single draw can be reproduced in isolation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent substream key from a master seed and a stream index
/// (trial number, draw number, ...). Used to hand out per-trial seeds.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: the i-th output is mix64(key + i*odd_constant),
/// i.e. a SplitMix64 stream keyed by (seed, stream). Stateless apart from the
/// counter, so parallel consumers simply claim disjoint streams.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(substream(seed, stream)) {}

  std::uint64_t next_u64() {
    return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform in [0,1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

  /// Uniform integer in [0, bound) via the multiply-shift reduction.
  std::uint32_t below(std::uint32_t bound) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Standard normal via Box-Muller (one value per call, pair cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Binomial draw as a Bernoulli count. Exact law, O(n).
  long long binomial(long long n, double p) {
    long long c = 0;
    for (long long i = 0; i < n; ++i) c += bernoulli(p) ? 1 : 0;
    return c;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace paclab
