#pragma once

#include <cstdint>

namespace mtdsim {

// Deterministic RNG used throughout the simulator: xoshiro256++ seeded via
// splitmix64. All draws come from raw 64-bit output rather than <random>
// distributions, so traces replay bit-exactly across platforms and standard
// library versions. Streams derived with child() are independent, which is
// what keeps parallel runs reproducible regardless of thread count.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0);

  uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  // Exponential with the given rate (mean 1/rate). rate must be > 0.
  double exponential(double rate);

  bool bernoulli(double p);

  // Unbiased integer in [0, n). n must be > 0.
  uint64_t uniform_int(uint64_t n);

  // Deterministic derived stream; children with distinct tags are
  // statistically independent of the parent and of each other.
  Rng child(uint64_t tag) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_ = 0;
  uint64_t s_[4] = {0, 0, 0, 0};
};

// Stable 64-bit mixer (splitmix64 finalizer); also used for config hashing.
uint64_t mix64(uint64_t x);
uint64_t hash_combine(uint64_t a, uint64_t b);

}  // namespace mtdsim
