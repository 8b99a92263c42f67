#pragma once

#include <stdexcept>
#include <string>

namespace imexstab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatches and violated structural conditions (symmetry,
/// definiteness, skew-symmetry).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A linear solve could not reach the requested residual.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The reference integrator failed its own step-halving check.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Grid not supported by an operator (e.g. projection on an odd cell count).
class UnsupportedGrid : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment or scheme configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace imexstab
