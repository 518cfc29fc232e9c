#pragma once

#include <stdexcept>
#include <string>

namespace polling {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Total load rho >= 1; no stationary regime exists.
class UnstableSystem : public Error {
 public:
  explicit UnstableSystem(double rho);
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

/// Every switch-over time has zero mean.
class ZeroSwitchover : public Error {
 public:
  ZeroSwitchover();
};

class NonpositiveParameter : public Error {
 public:
  using Error::Error;
};

/// An iteration hit its cap before reaching the requested tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A transform was asked for outside the range where its substitution is defined.
class UnsupportedEvaluation : public Error {
 public:
  using Error::Error;
};

/// Numerical differentiation could not meet the requested accuracy.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// Malformed model document (bad JSON, unknown key, wrong type).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace polling
