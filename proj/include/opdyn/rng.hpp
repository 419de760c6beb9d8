#pragma once

#include <cstdint>
#include <random>

namespace opdyn {

// Seedable, splittable 64-bit generator.
//
// Stream discipline: every independent unit of randomness (one experiment
// trial, one generated graph) gets its own stream, derived from the root seed
// and a stream index with SplitMix64. Streams never share state, so results do
// not depend on the order in which trials execute or on the thread count.
//
// The engine is mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform doubles are built from the top 53 bits directly instead of
// going through std::uniform_real_distribution (whose algorithm is
// implementation-defined), so outputs are bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  // Independent child stream `index` of this root seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace opdyn
