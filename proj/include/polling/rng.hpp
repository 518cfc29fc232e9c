#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace polling {

/// Seeded pseudo-random stream. One stream per consumer; never shared between threads.
///
/// Uniform draws are built from the raw 64-bit engine output rather than
/// std::uniform_real_distribution so that sequences are identical across
/// standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream number `index` derived from `base_seed` through std::seed_seq.
  static RngStream derived(std::uint64_t base_seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    RngStream s(0);
    s.engine_.seed(seq);
    return s;
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  double exponential(double mean) { return -mean * std::log(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polling
