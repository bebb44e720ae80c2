#pragma once

#include <stdexcept>
#include <string>

namespace fhn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable tag ("domain", "blow_up", ...).
  virtual const char* kind() const noexcept { return "error"; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// Grid or vector sizes that cannot support the operation.
class SizeError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "size"; }
};

/// Discretization too coarse for the requested modes or frequencies.
class ResolutionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resolution"; }
};

/// Explicit time step violates the stability guard.
class GuardError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "guard"; }
};

/// Non-finite state produced during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(double time, const std::string& what);
  double time() const noexcept { return time_; }
  const char* kind() const noexcept override { return "blow_up"; }

 private:
  double time_;
};

/// Eigenvalue search failure (bracketing, monotonicity).
class SolverError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "solver"; }
};

/// Root bracket does not enclose a sign change.
class BracketError : public Error {
 public:
  BracketError(double lo, double hi, double f_lo, double f_hi, const std::string& what);
  double lo, hi, f_lo, f_hi;
  const char* kind() const noexcept override { return "bracket"; }
};

/// Too few oscillation peaks in a time series.
class DetectionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "detection"; }
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

}  // namespace fhn
