#pragma once

#include <cstdint>
#include <random>

namespace unshuffle {

// splitmix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Seed for an independent sub-stream. Part of the reproducibility contract:
//
//   derive_seed(s, a)    = mix64(s ^ mix64(a + 0x9e3779b97f4a7c15))
//   derive_seed(s, a, b) = derive_seed(derive_seed(s, a), b)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

// Purpose tags for the draws that make up one problem instance.
enum class StreamTag : std::uint64_t {
  design = 1,
  permutation = 2,
  noise = 3,
};

std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag);

// mt19937_64 with portable transforms. The std:: distributions are
// implementation-defined, so they are not used for anything that must
// reproduce across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Standard normal (Box-Muller, second variate cached).
  double normal();
  // +1 or -1 with equal probability.
  double rademacher() { return (next() >> 63) != 0 ? 1.0 : -1.0; }
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace unshuffle
