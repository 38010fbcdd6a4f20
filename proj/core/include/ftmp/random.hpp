#pragma once

#include <cstdint>
#include <random>

namespace ftmp {

/// Seeded generator with a platform-independent mapping to doubles
/// (std::uniform_real_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ftmp
