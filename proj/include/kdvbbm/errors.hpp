#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kdvbbm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few grid points for the requested mode range.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Reality invariant broken beyond tolerance.
class CorruptedFieldError : public Error {
 public:
  using Error::Error;
};

// Argument outside the admissible domain (constraint identities, thresholds).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Parameters violate gamma1 > 0, delta1 > 0.
class HypothesisError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Mode index outside a precomputed table, or mismatched mode ranges.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace kdvbbm
