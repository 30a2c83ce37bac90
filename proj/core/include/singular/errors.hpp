#pragma once

#include <stdexcept>
#include <string>

namespace singular {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (non-positive
/// momentum, on-shell point beyond the cutoff, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this partial wave or channel type.
class UnsupportedChannel : public Error {
 public:
  using Error::Error;
};

/// The scattering equation (or the analytic running) sits on a pole at this
/// cutoff. Carries the estimated condition number of the linear system when
/// one is available.
class PoleCondition : public Error {
 public:
  PoleCondition(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// A root search could not find a solution inside the requested branch.
class BranchExhausted : public Error {
 public:
  using Error::Error;
};

/// A fit could not be performed (degenerate data, singular normal equations,
/// too few features in the fit window).
class FitError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace singular
