#include "mtdsim/rng.hpp"

#include <cmath>

#include "mtdsim/error.hpp"

namespace mtdsim {

namespace {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

uint64_t mix64(uint64_t x) {
  uint64_t s = x;
  return splitmix64(s);
}

uint64_t hash_combine(uint64_t a, uint64_t b) {
  return mix64(a ^ (0x9E3779B97F4A7C15ULL + (b << 6) + (b >> 2) + mix64(b)));
}

Rng::Rng(uint64_t seed) : seed_(seed) {
  uint64_t s = seed;
  for (auto& w : s_) w = splitmix64(s);
}

uint64_t Rng::next_u64() {
  // xoshiro256++
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw Error("exponential draw requires rate > 0");
  // log1p keeps precision for small u; u < 1 so the argument stays > -1.
  return -std::log1p(-uniform01()) / rate;
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

uint64_t Rng::uniform_int(uint64_t n) {
  if (n == 0) throw Error("uniform_int requires n > 0");
  // Rejection sampling to avoid modulo bias.
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

Rng Rng::child(uint64_t tag) const {
  return Rng(hash_combine(seed_, tag));
}

}  // namespace mtdsim
