#pragma once

#include <stdexcept>
#include <string>

namespace lavrentiev {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible shapes or grids, empty inputs.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (bad key, out-of-range parameter, missing file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A linear or nonlinear solve failed. Carries the last residual norm seen.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace lavrentiev
