#pragma once

#include <functional>
#include <string>

#include "gsprk/types.hpp"

namespace gsprk {

enum class JacobianMode {
  FiniteDifference,  // simplified Newton with a forward-difference Jacobian
  FixedPoint,        // plain functional iteration, small h only
};

struct StepperConfig {
  double h = 0.1;
  double solver_abs_tol = 1e-12;
  double solver_rel_tol = 1e-12;
  int max_iterations = 50;
  JacobianMode jacobian_mode = JacobianMode::FiniteDifference;

  /// Throws InvalidSpecError unless h > 0, tolerances > 0 and
  /// max_iterations >= 1.
  void validate() const;
};

/// An implicit stage system F(x) = 0. `fixed_point` is an equivalent map
/// x = G(x) used in FixedPoint mode; it may be left empty for Newton-only
/// problems.
struct StageProblem {
  std::function<Vector(const Vector&)> residual;
  std::function<Vector(const Vector&)> fixed_point;
};

struct StageSolveResult {
  Vector x;
  int iterations = 0;
  double residual = 0.0;  // |F(x)|_inf at exit
};

/// Drives F(x) to |F|_inf <= max(abs_tol, rel_tol * scale).
///
/// Newton mode builds the Jacobian by forward differences with step
/// 1e-7 max(1, |x_k|), reuses it while the residual contracts by at least a
/// factor 2 per iteration and rebuilds it otherwise. Throws ConvergenceError
/// after max_iterations and NumericalError on non-finite residuals.
StageSolveResult solve_stage_system(const StageProblem& problem, Vector x0,
                                    const StepperConfig& config, double scale);

/// Forward-difference Jacobian of f at x, step 1e-7 max(1, |x_k|).
Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                                  const Vector& fx);

}  // namespace gsprk
