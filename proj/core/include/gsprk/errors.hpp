#pragma once

#include <stdexcept>
#include <string>

namespace gsprk {

/// Rejected input: bad basis/node pairing, unknown names, violated
/// preconditions. The CLI maps this to exit code 2.
class InvalidSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The Hamiltonian has no Lagrangian counterpart (fiber derivative not
/// invertible).
class DegenerateSystemError : public InvalidSpecError {
 public:
  using InvalidSpecError::InvalidSpecError;
};

/// A numerical procedure did not produce a trustworthy result: stage solver
/// divergence, NaN/Inf, shooting failure. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : NumericalError(what), iterations_(iterations), residual_(residual) {}

  [[nodiscard]] int iterations() const { return iterations_; }
  [[nodiscard]] double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace gsprk
