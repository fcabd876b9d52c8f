#pragma once

#include <cstdint>
#include <random>

namespace bouligand {

// Standard normal draws from std::mt19937_64 through the Marsaglia polar
// method. The engine output is fixed by the standard, and so is this
// transform, so streams are reproducible across platforms for a given seed.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bouligand
