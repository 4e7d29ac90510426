#pragma once

#include <stdexcept>
#include <string>

namespace subrad {

/// Invalid user configuration: bad parameter ranges, malformed files,
/// mismatched sizes. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition was violated (e.g. coinciding atoms).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical breakdown: ill-conditioned eigenbasis, step underflow,
/// norm growth in a dissipative evolution. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace subrad
