#pragma once

#include <cstdint>
#include <random>

namespace margulis {

/// Seeded generator with hand-rolled uniform draws. std::mt19937_64 output is
/// specified by the standard and the mantissa construction below avoids the
/// implementation-defined std::*_distribution classes, so identical seeds give
/// identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [lo, hi) with 53-bit resolution.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Uniform sign.
  int sign() { return (gen_() & 1u) ? 1 : -1; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace margulis
