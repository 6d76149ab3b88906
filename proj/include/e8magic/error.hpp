#pragma once

#include <stdexcept>
#include <string>

namespace e8magic {

/// Caller passed something outside an operation's domain (bad grid, Im z <= 0, unknown form, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not deliver a result with the promised guarantee
/// (divergent tail majorant, quadrature did not converge, insufficient truncation order).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace e8magic
