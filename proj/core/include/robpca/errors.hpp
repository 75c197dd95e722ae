#pragma once

#include <stdexcept>
#include <string>

namespace robpca {

// Invalid argument (rank too large, dimension mismatch, bad epsilon, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix or vector carried NaN or Inf.
class NonFiniteError : public std::domain_error {
 public:
  explicit NonFiniteError(const std::string& what) : std::domain_error(what) {}
};

// Exhaustive enumeration refused because the search space exceeds its guard.
class SizeError : public std::length_error {
 public:
  explicit SizeError(const std::string& what) : std::length_error(what) {}
};

// Every guess of a ladder sweep failed.
class SweepFailure : public std::runtime_error {
 public:
  explicit SweepFailure(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text/JSON input.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace robpca
