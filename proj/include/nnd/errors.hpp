// Error types thrown by the decoding toolkit.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nnd {

// Invalid argument or precondition violation.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Requested object would exceed a hard size guard (e.g. k > 16).
class CapacityError : public std::invalid_argument {
 public:
  explicit CapacityError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Random codebook construction ran out of attempts.
class ConstructionInfeasibleError : public std::runtime_error {
 public:
  explicit ConstructionInfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training produced a non-finite loss.
class TrainingDivergedError : public std::runtime_error {
 public:
  TrainingDivergedError(std::int64_t epoch, const std::string& msg)
      : std::runtime_error(msg), epoch_(epoch) {}
  std::int64_t epoch() const noexcept { return epoch_; }

 private:
  std::int64_t epoch_;
};

// Every SNR point of an NVE evaluation had zero MAP bit errors.
class UndefinedNveError : public std::runtime_error {
 public:
  explicit UndefinedNveError(const std::string& msg) : std::runtime_error(msg) {}
};

// File could not be read, written or parsed.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nnd
