#include "gsprk/stage_solver.hpp"

#include <cmath>
#include <sstream>

#include "gsprk/errors.hpp"

namespace gsprk {

void StepperConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidSpecError("step size h must be positive");
  if (!(solver_abs_tol > 0.0) || !(solver_rel_tol > 0.0)) {
    throw InvalidSpecError("solver tolerances must be positive");
  }
  if (max_iterations < 1) throw InvalidSpecError("max_iterations must be at least 1");
}

Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                                  const Vector& fx) {
  Matrix jac(fx.size(), x.size());
  Vector xk = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double eps = 1e-7 * std::max(1.0, std::abs(x(k)));
    xk(k) = x(k) + eps;
    jac.col(k) = (f(xk) - fx) / eps;
    xk(k) = x(k);
  }
  return jac;
}

namespace {

double checked_norm(const Vector& r, int iteration) {
  if (!r.allFinite()) {
    throw NumericalError("stage residual became non-finite at iteration " +
                         std::to_string(iteration));
  }
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

[[noreturn]] void fail(int iterations, double residual, double tol) {
  std::ostringstream os;
  os << "stage solver did not converge in " << iterations << " iterations (residual "
     << residual << ", tolerance " << tol << "); step size may be too large";
  throw ConvergenceError(os.str(), iterations, residual);
}

StageSolveResult solve_newton(const StageProblem& problem, Vector x, const StepperConfig& config,
                              double tol) {
  Vector r = problem.residual(x);
  double norm = checked_norm(r, 0);
  Eigen::PartialPivLU<Matrix> lu;
  bool have_jacobian = false;
  bool fresh = false;
  int it = 0;
  while (norm > tol) {
    if (it == config.max_iterations) fail(it, norm, tol);
    if (!have_jacobian) {
      lu.compute(finite_difference_jacobian(problem.residual, x, r));
      have_jacobian = fresh = true;
    }
    const Vector dx = lu.solve(r);
    if (!dx.allFinite()) throw NumericalError("stage Jacobian is singular");
    Vector x_new = x - dx;
    Vector r_new = problem.residual(x_new);
    const double norm_new = checked_norm(r_new, it + 1);
    ++it;
    if (norm_new > 0.5 * norm && !fresh) {
      // Slow contraction with a stale Jacobian: rebuild at the new iterate.
      have_jacobian = false;
    }
    fresh = false;
    x = std::move(x_new);
    r = std::move(r_new);
    norm = norm_new;
  }
  return {std::move(x), it, norm};
}

StageSolveResult solve_fixed_point(const StageProblem& problem, Vector x,
                                   const StepperConfig& config, double tol) {
  if (!problem.fixed_point) {
    throw InvalidSpecError("this stage system has no fixed-point form; use FiniteDifference mode");
  }
  double norm = checked_norm(problem.residual(x), 0);
  int it = 0;
  while (norm > tol) {
    if (it == config.max_iterations) fail(it, norm, tol);
    x = problem.fixed_point(x);
    ++it;
    norm = checked_norm(problem.residual(x), it);
  }
  return {std::move(x), it, norm};
}

}  // namespace

StageSolveResult solve_stage_system(const StageProblem& problem, Vector x0,
                                    const StepperConfig& config, double scale) {
  const double tol = std::max(config.solver_abs_tol, config.solver_rel_tol * scale);
  if (config.jacobian_mode == JacobianMode::FixedPoint) {
    return solve_fixed_point(problem, std::move(x0), config, tol);
  }
  return solve_newton(problem, std::move(x0), config, tol);
}

}  // namespace gsprk
