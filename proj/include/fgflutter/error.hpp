#pragma once

#include <stdexcept>
#include <string>

namespace fgflutter {

/// Argument outside the mathematical domain of a formula (z outside the
/// thickness, non-positive temperature, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid user or programmatic configuration (bad mesh size, unknown
/// boundary-condition keyword, too few quadrature points, ...).
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: singular factorization, non-convergent
/// eigensolver, degenerate geometry.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fgflutter
