#pragma once

#include <stdexcept>
#include <string>

namespace qgeo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point (or a stencil around it) violates a model's validity domain.
/// The message names the violated constraint.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter name is not part of the coordinate chart in use.
class UnknownParameter : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Hyperbolic evaluation would overflow double precision.
class RangeOverflow : public Error {
 public:
  using Error::Error;
};

/// A squared normal frequency sits within tolerance of zero; the caller
/// decides how to treat the limit (one-sided sequences, never evaluation
/// at the boundary itself).
class BifurcationBoundary : public Error {
 public:
  using Error::Error;
};

/// An equation has no solution for the requested inputs.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

/// A submetric is degenerate, so curvature cannot be computed.
class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// Normalization over a window where max == min.
class DegenerateNormalization : public Error {
 public:
  using Error::Error;
};

/// A scan path leaves its region or crosses a bifurcation boundary.
class InvalidPath : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qgeo
