#pragma once

#include <cstdint>
#include <random>

namespace cdust {

/// SplitMix64 step; used to derive independent, well-mixed stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of stream `index` under master `seed`. Streams for different indices
/// are decorrelated, so per-trial work can run in any order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// mt19937_64 with platform-independent real and boolean draws (the standard
/// distributions are implementation-defined, which would break byte-identical
/// output across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_stream(std::uint64_t seed, std::uint64_t index) { return Rng(stream_seed(seed, index)); }

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cdust
