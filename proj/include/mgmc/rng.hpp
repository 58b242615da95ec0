#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mgmc::rng {

/// splitmix64 mixing step; used to derive independent substream seeds.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
  return mix(mix(seed) ^ mix(stream_id * 0xD6E8FEB86659FD93ULL + 1));
}

/// Deterministic substream keyed by (seed, stream id). The uniform and
/// normal mappings are fixed here rather than taken from <random>
/// distributions so that draws are bit-identical across standard library
/// versions, which the replay and determinism contracts rely on.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : engine_(derive(seed, stream_id)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; pairs are consumed in a fixed order.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * uniform01();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  /// Circularly-symmetric complex normal with unit variance, CN(0,1).
  std::complex<double> cnormal() {
    const double s = M_SQRT1_2;
    return {s * normal(), s * normal()};
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mgmc::rng
