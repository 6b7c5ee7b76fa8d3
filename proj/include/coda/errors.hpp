#pragma once

#include <stdexcept>

namespace coda {

// Bad construction arguments or configuration: sizes, parameter bounds,
// dimension mismatches, malformed input files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Initial conditions that break the standing assumption of the model
// (opinions strictly inside (-1, 1) and nonzero, pollution off the threshold).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a closed-form quantity.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Not enough samples for the requested analysis.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coda
