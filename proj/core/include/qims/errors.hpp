#pragma once

#include <stdexcept>
#include <string>

namespace qims {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto its exit codes (2 = configuration, 3 = numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter constraints or dimensions violated.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Index out of range or mismatched (L, N) contexts.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// z sits on a pole of the Hamiltonians (z_i in {0,1} or z_i = z_j).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of a weight or form.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or series failed to stabilize, or an exponent window is violated.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Adaptive ODE integration could not proceed (step underflow near a pole).
class PropagationError : public Error {
 public:
  using Error::Error;
};

/// Requested operation is not defined for this configuration.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace qims
