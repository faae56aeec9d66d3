#include "nnd/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nnd/errors.hpp"
#include "nnd/io_util.hpp"
#include "nnd/rng.hpp"

namespace nnd {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
  int n = 0;
  while ((1 << n) < v) ++n;
  return n;
}

std::uint64_t word_as_u64(const BitVec& w) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i]) x |= std::uint64_t{1} << i;
  return x;
}

}  // namespace

const char* to_string(CodeFamily family) {
  return family == CodeFamily::Polar ? "polar" : "random";
}

CodeFamily code_family_from_string(const std::string& name) {
  if (name == "polar") return CodeFamily::Polar;
  if (name == "random") return CodeFamily::Random;
  throw ParameterError("unknown code family: " + name);
}

void validate_code_params(const CodeParams& params) {
  const int N = params.block_length;
  const int k = params.info_bits;
  if (N < 1 || N > 64) throw CapacityError("block length must be in [1, 64]");
  if (k > 16) throw CapacityError("info bits must be <= 16 (2^k codewords held in full)");
  if (k > N) throw ParameterError("info bits must not exceed block length");
  if (params.family == CodeFamily::Polar) {
    if (k < 1) throw ParameterError("polar code requires at least one info bit");
    if (!is_power_of_two(N) || N < 2)
      throw ParameterError("polar block length must be a power of 2, >= 2");
  } else {
    if (k < 0) throw ParameterError("info bits must be non-negative");
  }
}

BitVec Codebook::message_bits(std::uint64_t m) const {
  const int k = params.info_bits;
  BitVec bits(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    bits[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((m >> (k - 1 - i)) & 1u);
  return bits;
}

std::uint64_t Codebook::bits_to_message(const BitVec& bits) {
  std::uint64_t m = 0;
  for (std::uint8_t b : bits) m = (m << 1) | (b & 1u);
  return m;
}

BitMatrix polar_generator_matrix(int n) {
  if (n < 1 || n > 10) throw ParameterError("polar_generator_matrix: n must be in [1, 10]");
  BitMatrix g{{1}};
  const BitMatrix f{{1, 0}, {1, 1}};
  for (int step = 0; step < n; ++step) {
    const std::size_t m = g.size();
    BitMatrix next(2 * m, BitVec(2 * m, 0));
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        if (!f[r][c]) continue;
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            next[r * m + i][c * m + j] = g[i][j];
      }
    g = std::move(next);
  }
  return g;
}

std::vector<int> polar_frozen_set(int block_length, int info_bits) {
  if (!is_power_of_two(block_length) || block_length < 2)
    throw ParameterError("polar_frozen_set: block length must be a power of 2, >= 2");
  if (info_bits < 0 || info_bits > block_length)
    throw ParameterError("polar_frozen_set: info bits out of range");

  // Bhattacharyya parameter of bit channel i: walk i's binary digits MSB
  // first from the root Z = 0.5; digit 1 takes the Z^2 branch, digit 0 the
  // 2Z - Z^2 branch.
  const int n = log2_exact(block_length);
  std::vector<double> zz(static_cast<std::size_t>(block_length));
  for (int i = 0; i < block_length; ++i) {
    double v = 0.5;
    for (int level = n - 1; level >= 0; --level) {
      const bool better = (i >> level) & 1;
      v = better ? v * v : 2.0 * v - v * v;
    }
    zz[static_cast<std::size_t>(i)] = v;
  }

  std::vector<int> order(static_cast<std::size_t>(block_length));
  std::iota(order.begin(), order.end(), 0);
  // Largest Z first; equal Z freezes the lower index first.
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (zz[static_cast<std::size_t>(a)] != zz[static_cast<std::size_t>(b)])
      return zz[static_cast<std::size_t>(a)] > zz[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::vector<int> frozen(order.begin(), order.begin() + (block_length - info_bits));
  std::sort(frozen.begin(), frozen.end());
  return frozen;
}

BitVec polar_encode(const BitVec& info_bits, const std::vector<int>& frozen_set,
                    const BitMatrix& generator) {
  const std::size_t n = generator.size();
  if (info_bits.size() + frozen_set.size() != n)
    throw ParameterError("polar_encode: info bits + frozen positions must equal N");

  BitVec u(n, 0);
  std::vector<std::uint8_t> is_frozen(n, 0);
  for (int f : frozen_set) {
    if (f < 0 || static_cast<std::size_t>(f) >= n)
      throw ParameterError("polar_encode: frozen index out of range");
    is_frozen[static_cast<std::size_t>(f)] = 1;
  }
  std::size_t next_info = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_frozen[i]) u[i] = info_bits[next_info++] & 1u;
  if (next_info != info_bits.size())
    throw ParameterError("polar_encode: frozen set overlaps info positions");

  BitVec x(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < n; ++j) x[j] ^= generator[i][j];
  }
  return x;
}

Codebook build_random_codebook(const CodeParams& params, std::uint64_t attempt_budget_per_slot) {
  if (params.family != CodeFamily::Random)
    throw ParameterError("build_random_codebook: params must use the Random family");
  validate_code_params(params);

  const int N = params.block_length;
  const std::uint64_t count = std::uint64_t{1} << params.info_bits;
  RngStream rng = RngStream::derive(params.seed, 0x636f6465626f6f6bULL);

  std::vector<BitVec> words;
  std::vector<std::uint64_t> packed;  // same codewords as uint64 for fast distance checks
  words.reserve(count);
  const std::uint64_t mask = (N == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << N) - 1);

  for (std::uint64_t slot = 0; slot < count; ++slot) {
    bool placed = false;
    for (std::uint64_t attempt = 0; attempt < attempt_budget_per_slot; ++attempt) {
      const std::uint64_t candidate = rng.next_u64() & mask;
      bool ok = true;
      for (std::uint64_t w : packed) {
        if (std::popcount(w ^ candidate) < 3) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      BitVec bits(static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i)
        bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((candidate >> i) & 1u);
      words.push_back(std::move(bits));
      packed.push_back(candidate);
      placed = true;
      break;
    }
    if (!placed)
      throw ConstructionInfeasibleError(
          "random codebook construction exhausted its attempt budget at codeword " +
          std::to_string(slot) + " of " + std::to_string(count));
  }

  Codebook cb;
  cb.params = params;
  cb.codewords = std::move(words);
  return cb;
}

Codebook enumerate_codebook(const CodeParams& params) {
  validate_code_params(params);
  if (params.family == CodeFamily::Random) return build_random_codebook(params);

  const int N = params.block_length;
  const int k = params.info_bits;
  const int n = log2_exact(N);
  const BitMatrix g = polar_generator_matrix(n);
  const std::vector<int> frozen = polar_frozen_set(N, k);

  std::vector<int> info_positions;
  info_positions.reserve(static_cast<std::size_t>(k));
  {
    std::vector<std::uint8_t> is_frozen(static_cast<std::size_t>(N), 0);
    for (int f : frozen) is_frozen[static_cast<std::size_t>(f)] = 1;
    for (int i = 0; i < N; ++i)
      if (!is_frozen[static_cast<std::size_t>(i)]) info_positions.push_back(i);
  }

  Codebook cb;
  cb.params = params;
  cb.frozen_set = frozen;
  const std::uint64_t count = std::uint64_t{1} << k;
  cb.codewords.reserve(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    BitVec x(static_cast<std::size_t>(N), 0);
    for (int i = 0; i < k; ++i) {
      if (!((m >> (k - 1 - i)) & 1u)) continue;
      const auto& row = g[static_cast<std::size_t>(info_positions[static_cast<std::size_t>(i)])];
      for (int j = 0; j < N; ++j) x[static_cast<std::size_t>(j)] ^= row[static_cast<std::size_t>(j)];
    }
    cb.codewords.push_back(std::move(x));
  }
  return cb;
}

CodebookSplit split_codebook(const Codebook& codebook, double coverage_percent,
                             std::uint64_t seed) {
  if (!(coverage_percent > 0.0) || coverage_percent > 100.0)
    throw ParameterError("split_codebook: coverage percent must be in (0, 100]");
  const std::size_t total = codebook.size();
  const auto seen_count = static_cast<std::size_t>(
      std::llround(coverage_percent / 100.0 * static_cast<double>(total)));
  if (seen_count < 1)
    throw ParameterError("split_codebook: requested coverage yields an empty training set");

  std::vector<int> indices(total);
  std::iota(indices.begin(), indices.end(), 0);
  RngStream rng = RngStream::derive(seed, 0x73706c6974ULL);
  // Partial Fisher-Yates: the first seen_count entries are a uniform subset.
  for (std::size_t i = 0; i < seen_count; ++i) {
    const std::size_t j = i + rng.next_below(total - i);
    std::swap(indices[i], indices[j]);
  }

  CodebookSplit split;
  split.coverage_percent = coverage_percent;
  split.seed = seed;
  split.seen.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(seen_count));
  split.unseen.assign(indices.begin() + static_cast<std::ptrdiff_t>(seen_count), indices.end());
  std::sort(split.seen.begin(), split.seen.end());
  std::sort(split.unseen.begin(), split.unseen.end());
  return split;
}

int hamming_distance(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) throw ParameterError("hamming_distance: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] ^ b[i]) & 1u;
  return d;
}

int min_hamming_distance(const Codebook& codebook) {
  const auto& words = codebook.codewords;
  if (words.size() < 2) return codebook.block_length();
  int best = codebook.block_length() + 1;
  if (codebook.params.family == CodeFamily::Polar) {
    // Linear code: minimum distance equals minimum nonzero weight.
    for (std::size_t m = 1; m < words.size(); ++m) {
      int w = 0;
      for (std::uint8_t bit : words[m]) w += bit;
      best = std::min(best, w);
    }
    return best;
  }
  std::vector<std::uint64_t> packed(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) packed[i] = word_as_u64(words[i]);
  for (std::size_t i = 0; i < packed.size(); ++i)
    for (std::size_t j = i + 1; j < packed.size(); ++j)
      best = std::min(best, std::popcount(packed[i] ^ packed[j]));
  return best;
}

void save_codebook(const Codebook& codebook, const std::filesystem::path& path) {
  std::ostringstream out;
  out << to_string(codebook.params.family) << ' ' << codebook.params.block_length << ' '
      << codebook.params.info_bits << ' ' << codebook.params.seed << '\n';
  for (const auto& word : codebook.codewords) {
    for (std::uint8_t bit : word) out << (bit ? '1' : '0');
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

Codebook load_codebook(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open codebook file: " + path.string());
  std::string family_name;
  CodeParams params;
  if (!(in >> family_name >> params.block_length >> params.info_bits >> params.seed))
    throw IoError("malformed codebook header in " + path.string());
  params.family = code_family_from_string(family_name);

  Codebook cb;
  cb.params = params;
  const std::uint64_t count = std::uint64_t{1} << params.info_bits;
  std::string line;
  std::getline(in, line);  // consume end of header line
  for (std::uint64_t m = 0; m < count; ++m) {
    if (!std::getline(in, line) || line.size() != static_cast<std::size_t>(params.block_length))
      throw IoError("malformed codeword line in " + path.string());
    BitVec word(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] != '0' && line[i] != '1')
        throw IoError("invalid codeword character in " + path.string());
      word[i] = static_cast<std::uint8_t>(line[i] == '1');
    }
    cb.codewords.push_back(std::move(word));
  }
  if (params.family == CodeFamily::Polar)
    cb.frozen_set = polar_frozen_set(params.block_length, params.info_bits);
  return cb;
}

}  // namespace nnd
