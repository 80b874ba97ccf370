#pragma once

#include <cstdint>
#include <random>

namespace nsgev {

// All randomness in the library flows through Rng: a std::mt19937_64 engine
// with hand-rolled conversions, so draws are identical across standard
// libraries. Uniforms are ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller, both variates used.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer over (seed, stream). Replicate b of a bootstrap uses
// Rng(stream_seed(seed, b)) so results do not depend on execution order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

double standard_normal_cdf(double z);

}  // namespace nsgev
