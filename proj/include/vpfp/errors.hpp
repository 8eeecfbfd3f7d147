#pragma once

#include <stdexcept>
#include <string>

namespace vpfp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or inconsistent inputs. CLI exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

// NaN/Inf or blow-up detected during integration. CLI exit code 2.
struct NumericsError : Error {
  using Error::Error;
};

// Iterative solver did not reach its tolerance.
struct ConvergenceError : Error {
  double residual;
  ConvergenceError(const std::string& what, double res)
      : Error(what), residual(res) {}
};

}  // namespace vpfp
