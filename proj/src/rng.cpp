#include "nnd/rng.hpp"

#include <cmath>

#include "nnd/errors.hpp"

namespace nnd {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream RngStream::from_seed(std::uint64_t seed) {
  // Standard xoshiro seeding: four successive SplitMix64 outputs.
  std::array<std::uint64_t, 4> s{};
  std::uint64_t x = seed;
  for (auto& w : s) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    w = z ^ (z >> 31);
  }
  if (s[0] == 0 && s[1] == 0 && s[2] == 0 && s[3] == 0) s[0] = 1;
  return RngStream(s);
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ mix64(a));
  h = mix64(h ^ mix64(b));
  h = mix64(h ^ mix64(c));
  return from_seed(h);
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("next_below: bound must be positive");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  // Rejection from the largest multiple of bound below 2^64.
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_gaussian_ = v * f;
  has_spare_ = true;
  return u * f;
}

void RngStream::fill_gaussian(double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = next_gaussian();
}

}  // namespace nnd
