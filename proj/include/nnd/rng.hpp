// Seeded, splittable random streams (xoshiro256++ core, Marsaglia polar Gaussians).
//
// Reproducibility contract: a stream is fully determined by the values passed
// to from_seed()/derive() and by how many variates of each kind were drawn
// from it. Derived streams are statistically independent for distinct ids.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace nnd {

class RngStream {
 public:
  RngStream() : RngStream(from_seed(0)) {}

  static RngStream from_seed(std::uint64_t seed);

  // Independent stream addressed by (seed, a, b, c), e.g. (master, snr_index, chunk).
  static RngStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit();

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi);

  // Unbiased uniform integer on [0, bound); bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  // Standard normal variate.
  double next_gaussian();

  void fill_gaussian(double* out, std::size_t n);

 private:
  explicit RngStream(const std::array<std::uint64_t, 4>& state) : state_(state) {}

  std::array<std::uint64_t, 4> state_{};
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used for seeding and stream derivation.
std::uint64_t mix64(std::uint64_t z);

}  // namespace nnd
