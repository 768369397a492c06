#include <cmath>

#include <gtest/gtest.h>

#include "gsprk/errors.hpp"
#include "gsprk/stage_solver.hpp"

using namespace gsprk;

TEST(StepperConfig, Validation) {
  StepperConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.h = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidSpecError);
  cfg = {};
  cfg.solver_abs_tol = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidSpecError);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), InvalidSpecError);
}

TEST(SolveStageSystem, NewtonOnCoupledQuadratics) {
  // x^2 + y^2 = 4, x = y  ->  x = y = sqrt(2)
  StageProblem prob;
  prob.residual = [](const Vector& x) {
    return (Vector(2) << x(0) * x(0) + x(1) * x(1) - 4.0, x(0) - x(1)).finished();
  };
  const StageSolveResult r = solve_stage_system(prob, Vector::Ones(2), StepperConfig{}, 1.0);
  EXPECT_NEAR(r.x(0), std::sqrt(2.0), 1e-11);
  EXPECT_NEAR(r.x(1), std::sqrt(2.0), 1e-11);
  EXPECT_LE(r.residual, 1e-12);
  EXPECT_GT(r.iterations, 0);
}

TEST(SolveStageSystem, FixedPointMode) {
  StageProblem prob;
  prob.residual = [](const Vector& x) { return Vector(x - 0.5 * x.array().cos().matrix()); };
  prob.fixed_point = [](const Vector& x) { return Vector(0.5 * x.array().cos().matrix()); };
  StepperConfig cfg;
  cfg.jacobian_mode = JacobianMode::FixedPoint;
  cfg.max_iterations = 200;
  const StageSolveResult r = solve_stage_system(prob, Vector::Zero(1), cfg, 1.0);
  EXPECT_NEAR(r.x(0), 0.5 * std::cos(r.x(0)), 1e-12);
}

TEST(SolveStageSystem, FixedPointNeedsMap) {
  StageProblem prob;
  prob.residual = [](const Vector& x) { return x; };
  StepperConfig cfg;
  cfg.jacobian_mode = JacobianMode::FixedPoint;
  EXPECT_THROW(solve_stage_system(prob, Vector::Ones(1), cfg, 1.0), InvalidSpecError);
}

TEST(SolveStageSystem, NonconvergenceReported) {
  StageProblem prob;
  prob.residual = [](const Vector& x) { return Vector(x.array().square() + 1.0); };
  StepperConfig cfg;
  cfg.max_iterations = 8;
  try {
    solve_stage_system(prob, Vector::Ones(1), cfg, 1.0);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.residual(), 0.5);
  } catch (const NumericalError&) {
    // a singular Jacobian may also surface as non-finite iterates
  }
}

TEST(SolveStageSystem, NonFiniteResidualRejected) {
  StageProblem prob;
  prob.residual = [](const Vector& x) { return Vector(x.array().log() + 1e300 * 1e300); };
  EXPECT_THROW(solve_stage_system(prob, Vector::Ones(1), StepperConfig{}, 1.0), NumericalError);
}

TEST(FiniteDifferenceJacobian, LinearMapExact) {
  Matrix A(2, 2);
  A << 1, 2, -3, 4;
  auto f = [&](const Vector& x) { return Vector(A * x); };
  const Vector x = (Vector(2) << 0.3, -0.7).finished();
  EXPECT_LT((finite_difference_jacobian(f, x, f(x)) - A).cwiseAbs().maxCoeff(), 1e-7);
}
