#pragma once

#include <stdexcept>
#include <string>

namespace anisorobin {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (zero vector
/// passed to a gradient, K_nu at x <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument so large that the unscaled special functions would overflow.
class RangeError : public Error {
 public:
  using Error::Error;
};

class InvalidNormError : public Error {
 public:
  using Error::Error;
};

class InvalidPolygonError : public Error {
 public:
  using Error::Error;
};

/// Point outside the polygon passed to the distance function.
class OutsideDomainError : public Error {
 public:
  using Error::Error;
};

/// P_F^2 - 4 kappa A went negative beyond round-off; signals broken geometry.
class IsoperimetricViolationError : public Error {
 public:
  using Error::Error;
};

/// A secular equation had no sign change in the admissible bracket.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// Linear solver or factorization failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace anisorobin
