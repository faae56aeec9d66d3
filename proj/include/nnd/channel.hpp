// BPSK modulation, AWGN noise and LLR conversion: the non-trainable layers
// between encoder and decoder.
#pragma once

#include <string>
#include <vector>

#include "nnd/codebook.hpp"
#include "nnd/rng.hpp"

namespace nnd {

enum class InputMode { ChannelValues, Llr };

const char* to_string(InputMode mode);
InputMode input_mode_from_string(const std::string& name);

struct ChannelParams {
  double ebn0_db = 0.0;
  double rate = 0.5;
  double noise_variance = 1.0;  // sigma^2, derived from ebn0_db and rate
  InputMode input_mode = InputMode::ChannelValues;

  static ChannelParams make(double ebn0_db, double rate,
                            InputMode mode = InputMode::ChannelValues);
};

// Bit 0 -> +1.0, bit 1 -> -1.0.
std::vector<double> bpsk_modulate(const BitVec& bits);

// sigma^2 = 1 / (2 r 10^(EbN0_dB / 10)); energy per info bit convention.
double ebn0_to_sigma2(double ebn0_db, double rate);

// Adds one independent N(0, sigma2) sample per symbol; consumes exactly
// symbols.size() Gaussian variates from the stream, also when sigma2 == 0.
std::vector<double> add_awgn(const std::vector<double>& symbols, double sigma2,
                             RngStream& rng);
void add_awgn_inplace(double* symbols, std::size_t count, double sigma2, RngStream& rng);

// LLR(y) = 2 y / sigma^2 for BPSK over AWGN with the 0 -> +1 convention.
std::vector<double> to_llr(const std::vector<double>& received, double sigma2);

}  // namespace nnd
