// Polar and random block-code codebooks: construction, enumeration, splits, file io.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nnd {

using BitVec = std::vector<std::uint8_t>;
using BitMatrix = std::vector<BitVec>;

enum class CodeFamily { Polar, Random };

const char* to_string(CodeFamily family);
CodeFamily code_family_from_string(const std::string& name);

struct CodeParams {
  CodeFamily family = CodeFamily::Polar;
  int block_length = 16;       // N
  int info_bits = 8;           // k
  std::uint64_t seed = 0;      // Random family only

  double rate() const { return static_cast<double>(info_bits) / block_length; }
};

// Throws ParameterError/CapacityError on violated invariants
// (k range, N power of two for Polar, N <= 64, k <= 16).
void validate_code_params(const CodeParams& params);

struct Codebook {
  CodeParams params;
  std::vector<BitVec> codewords;  // index m holds the codeword of message m
  std::vector<int> frozen_set;    // Polar only; sorted, empty for Random

  int block_length() const { return params.block_length; }
  int info_bits() const { return params.info_bits; }
  std::size_t size() const { return codewords.size(); }

  // Big-endian message bits: first info bit is the most significant bit of m.
  BitVec message_bits(std::uint64_t m) const;
  static std::uint64_t bits_to_message(const BitVec& bits);
};

struct CodebookSplit {
  std::vector<int> seen;    // training subset, sorted
  std::vector<int> unseen;  // complement, sorted
  double coverage_percent = 100.0;
  std::uint64_t seed = 0;
};

// F^{(x)n} with F = [[1,0],[1,1]]; lower-triangular with unit diagonal over GF(2).
BitMatrix polar_generator_matrix(int n);

// Indices of the N-k least reliable bit channels under the Bhattacharyya
// recursion on a BEC with erasure probability 0.5 (root Z = 0.5, children
// 2Z - Z^2 and Z^2). Ties freeze the lower index first. Returned sorted.
std::vector<int> polar_frozen_set(int block_length, int info_bits);

// x = uG over GF(2), u holding info bits at non-frozen positions in ascending
// index order and zeros at frozen positions.
BitVec polar_encode(const BitVec& info_bits, const std::vector<int>& frozen_set,
                    const BitMatrix& generator);

// Seeded rejection sampling of 2^k distinct words with pairwise Hamming
// distance >= 3. Throws ConstructionInfeasibleError once a slot exhausts the
// attempt budget.
Codebook build_random_codebook(const CodeParams& params,
                               std::uint64_t attempt_budget_per_slot = 1000000);

// Full codebook for either family; message index m maps to the codeword of
// message bit pattern m.
Codebook enumerate_codebook(const CodeParams& params);

// Uniformly random |seen| = round(p/100 * 2^k) subset, deterministic per seed.
CodebookSplit split_codebook(const Codebook& codebook, double coverage_percent,
                             std::uint64_t seed);

int hamming_distance(const BitVec& a, const BitVec& b);

// Minimum pairwise Hamming distance; uses the minimum-weight shortcut for
// linear (Polar) codebooks.
int min_hamming_distance(const Codebook& codebook);

// Text format: header "family N k seed", then one N-character 0/1 string per
// codeword in message-index order. Round-trips bit-exactly.
void save_codebook(const Codebook& codebook, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace nnd
