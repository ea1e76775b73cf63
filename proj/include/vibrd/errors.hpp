#pragma once

#include <stdexcept>
#include <string>

namespace vibrd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Feasible region {Ax <= b, Cx = d} is empty.
class InfeasibleSet : public Error {
public:
  using Error::Error;
};

/// Feasible region is unbounded in some coordinate direction.
class UnboundedSet : public Error {
public:
  using Error::Error;
};

/// Vertex enumeration requested above the combinatorial guard (n > 8).
class DimensionTooLarge : public Error {
public:
  using Error::Error;
};

class BadRouteIndex : public Error {
public:
  using Error::Error;
};

/// Operator evaluated where it is not differentiable (clamped boundary).
class DomainError : public Error {
public:
  using Error::Error;
};

class NotStronglyMonotone : public Error {
public:
  using Error::Error;
};

class NonpositiveModulus : public Error {
public:
  using Error::Error;
};

class NoSolutionFound : public Error {
public:
  using Error::Error;
};

class StepTooLarge : public Error {
public:
  using Error::Error;
};

/// A dynamics-disturbance step left the feasible set. Carries the offending time.
class AdmissibilityViolated : public Error {
public:
  AdmissibilityViolated(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

private:
  double time_ = 0.0;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace vibrd
