#pragma once

#include <stdexcept>
#include <string>

namespace qfb {

/// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a stated invariant (non-Hermitian observable,
/// non-physical density matrix, malformed options, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Parameters left the domain where a closed form is defined (T <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters fall inside a singular band of a printed formula; callers
/// should use the numeric path instead.
class SingularParameterError : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian null space is not one-dimensional.
class DegenerateSteadyStateError : public Error {
 public:
  DegenerateSteadyStateError(int dimension, const std::string& what)
      : Error(what), dimension_(dimension) {}

  int dimension() const { return dimension_; }

 private:
  int dimension_;
};

/// The adaptive step controller underflowed the minimum step size.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfb
