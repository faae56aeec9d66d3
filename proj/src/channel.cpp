#include "nnd/channel.hpp"

#include <cmath>

#include "nnd/errors.hpp"

namespace nnd {

const char* to_string(InputMode mode) {
  return mode == InputMode::ChannelValues ? "channel" : "llr";
}

InputMode input_mode_from_string(const std::string& name) {
  if (name == "channel") return InputMode::ChannelValues;
  if (name == "llr") return InputMode::Llr;
  throw ParameterError("unknown input mode: " + name);
}

ChannelParams ChannelParams::make(double ebn0_db, double rate, InputMode mode) {
  ChannelParams p;
  p.ebn0_db = ebn0_db;
  p.rate = rate;
  p.noise_variance = ebn0_to_sigma2(ebn0_db, rate);
  p.input_mode = mode;
  return p;
}

std::vector<double> bpsk_modulate(const BitVec& bits) {
  std::vector<double> symbols(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) symbols[i] = bits[i] ? -1.0 : 1.0;
  return symbols;
}

double ebn0_to_sigma2(double ebn0_db, double rate) {
  if (!(rate > 0.0)) throw ParameterError("ebn0_to_sigma2: rate must be positive");
  return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

void add_awgn_inplace(double* symbols, std::size_t count, double sigma2, RngStream& rng) {
  if (sigma2 < 0.0) throw ParameterError("add_awgn: variance must be non-negative");
  const double sigma = std::sqrt(sigma2);
  for (std::size_t i = 0; i < count; ++i) symbols[i] += sigma * rng.next_gaussian();
}

std::vector<double> add_awgn(const std::vector<double>& symbols, double sigma2,
                             RngStream& rng) {
  std::vector<double> out = symbols;
  add_awgn_inplace(out.data(), out.size(), sigma2, rng);
  return out;
}

std::vector<double> to_llr(const std::vector<double>& received, double sigma2) {
  if (!(sigma2 > 0.0)) throw ParameterError("to_llr: variance must be positive");
  std::vector<double> llr(received.size());
  const double scale = 2.0 / sigma2;
  for (std::size_t i = 0; i < received.size(); ++i) llr[i] = scale * received[i];
  return llr;
}

}  // namespace nnd
