#pragma once

#include <stdexcept>
#include <string>

namespace mcse {

/// Malformed or unusable input data (CSV parse failures, too-short chains,
/// chain-count preconditions). Maps to CLI exit code 3.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during estimation (degenerate variance, singular or
/// non-positive-definite matrices). Maps to CLI exit code 4.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcse
