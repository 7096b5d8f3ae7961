#pragma once

#include <stdexcept>
#include <string>

namespace gbq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on user-supplied parameters (bad N, |lambda| >= 1, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The periodic box is too small for the profile to have decayed at x = +-L.
class DomainTooSmall : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterative method (Petviashvili, Newton, bisection) failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Dense eigensolver reported a failure.
class EigenSolverError : public Error {
 public:
  using Error::Error;
};

/// Sup norm of the evolving state crossed the configured threshold.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gbq
