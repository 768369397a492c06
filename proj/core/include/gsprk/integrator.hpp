#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsprk/basis.hpp"
#include "gsprk/errors.hpp"
#include "gsprk/stage_solver.hpp"
#include "gsprk/systems.hpp"
#include "gsprk/tableau.hpp"
#include "gsprk/types.hpp"

namespace gsprk {

/// Converged internal stages of one step. Row i of each matrix is the stage
/// vector in R^n.
struct StageSolution {
  Matrix Q;
  Matrix P;
  std::optional<Matrix> V;       // velocity coefficients (Galerkin forms)
  std::optional<Vector> lambda;  // Lagrange multiplier (Lagrangian form)
  int iterations = 0;
  double residual = 0.0;
};

struct StepResult {
  PhasePoint state;
  StageSolution stages;
};

/// s-stage partitioned Runge-Kutta step
///   Q^i = q0 + h sum_j a_ij dH/dp(Q^j, P^j)
///   P^i = p0 - h sum_j at_ij dH/dq(Q^j, P^j)
///   q1  = q0 + h sum_i b_i dH/dp(Q^i, P^i)
///   p1  = p0 - h sum_i b_i dH/dq(Q^i, P^i).
/// The tableau is used as given; admissibility is checked at construction
/// (build_tableau / validate_tableau), not here.
StepResult sprk_step(const HamiltonianSystem& system, const SprkTableau& tableau,
                     const StepperConfig& config, const Vector& q0, const Vector& p0);

/// Precomputed Galerkin data for a basis/node pairing.
struct GalerkinScheme {
  BasisIntegrals integrals;
  Vector b;  // induced quadrature weights

  /// Throws InvalidSpecError for a singular M or a vanishing weight.
  static GalerkinScheme make(const BasisSet& basis, const NodeSet& nodes);
  [[nodiscard]] int stages() const { return static_cast<int>(b.size()); }
};

/// Solves the Galerkin stationarity system directly in the unknowns (V^i, P^i):
///   0 = sum_i b_i P^i psi_j(c_i) - p0 B_j + h sum_i (b_i B_j - b_i A_ij) dH/dq(Q^i, P^i)
///   0 = sum_i psi_i(c_j) V^i - dH/dp(Q^j, P^j)
/// with Q^i = q0 + h sum_j A_ij V^j, then q1 = q0 + h sum_i B_i V^i and
/// p1 = p0 - h sum_i b_i dH/dq(Q^i, P^i).
StepResult direct_galerkin_step(const HamiltonianSystem& system, const BasisSet& basis,
                                const NodeSet& nodes, const StepperConfig& config,
                                const Vector& q0, const Vector& p0);
StepResult direct_galerkin_step(const HamiltonianSystem& system, const GalerkinScheme& scheme,
                                const StepperConfig& config, const Vector& q0, const Vector& p0);

/// Lagrangian Galerkin step in the unknowns (V^i, Qdot^i):
///   0 = sum_i b_i dL/dv(Q^i, Qdot^i) psi_j(c_i) - p0 B_j
///       - h sum_i (b_i B_j - b_i A_ij) dL/dq(Q^i, Qdot^i)
///   0 = sum_i psi_i(c_j) V^i - Qdot^j
/// then q1 = q0 + h sum_i B_i V^i, p1 = p0 + h sum_i b_i dL/dq(Q^i, Qdot^i).
/// The multiplier lambda equals p1. Newton mode only.
StepResult lagrangian_galerkin_step(const LagrangianSystem& system, const BasisSet& basis,
                                    const NodeSet& nodes, const StepperConfig& config,
                                    const Vector& q0, const Vector& p0);
StepResult lagrangian_galerkin_step(const LagrangianSystem& system, const GalerkinScheme& scheme,
                                    const StepperConfig& config, const Vector& q0,
                                    const Vector& p0);

/// A one-step map (q0, p0) -> (q1, p1) with fixed step size.
class Stepper {
 public:
  virtual ~Stepper() = default;
  [[nodiscard]] virtual StepResult step(const Vector& q0, const Vector& p0) const = 0;
  [[nodiscard]] virtual const StepperConfig& config() const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
  /// Configuration dimension n.
  [[nodiscard]] virtual int dimension() const = 0;
};

class SprkStepper final : public Stepper {
 public:
  SprkStepper(HamiltonianSystem system, SprkTableau tableau, StepperConfig config);

  [[nodiscard]] StepResult step(const Vector& q0, const Vector& p0) const override;
  [[nodiscard]] const StepperConfig& config() const override { return config_; }
  [[nodiscard]] std::string name() const override;
  [[nodiscard]] int dimension() const override { return system_.n; }
  [[nodiscard]] const SprkTableau& tableau() const { return tableau_; }

 private:
  HamiltonianSystem system_;
  SprkTableau tableau_;
  StepperConfig config_;
};

class GalerkinStepper final : public Stepper {
 public:
  GalerkinStepper(HamiltonianSystem system, const BasisSet& basis, const NodeSet& nodes,
                  StepperConfig config);

  [[nodiscard]] StepResult step(const Vector& q0, const Vector& p0) const override;
  [[nodiscard]] const StepperConfig& config() const override { return config_; }
  [[nodiscard]] std::string name() const override { return "galerkin[" + label_ + "]"; }
  [[nodiscard]] int dimension() const override { return system_.n; }

 private:
  HamiltonianSystem system_;
  GalerkinScheme scheme_;
  StepperConfig config_;
  std::string label_;
};

class LagrangianGalerkinStepper final : public Stepper {
 public:
  LagrangianGalerkinStepper(LagrangianSystem system, const BasisSet& basis, const NodeSet& nodes,
                            StepperConfig config);

  [[nodiscard]] StepResult step(const Vector& q0, const Vector& p0) const override;
  [[nodiscard]] const StepperConfig& config() const override { return config_; }
  [[nodiscard]] std::string name() const override { return "lagrangian[" + label_ + "]"; }
  [[nodiscard]] int dimension() const override { return system_.n; }

 private:
  LagrangianSystem system_;
  GalerkinScheme scheme_;
  StepperConfig config_;
  std::string label_;
};

/// Uniformly spaced discrete trajectory {(q_k, p_k)}.
struct Trajectory {
  double h = 0.0;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  /// Stage residual and iteration count of step k -> k+1.
  std::vector<double> stage_residuals;
  std::vector<int> stage_iterations;

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] const PhasePoint& back() const { return states.back(); }
};

/// Raised by integrate when a step fails; carries the states computed so far.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, std::size_t failed_step, Trajectory partial)
      : NumericalError(what), failed_step_(failed_step), partial_(std::move(partial)) {}

  /// Index k of the step k -> k+1 that failed.
  [[nodiscard]] std::size_t failed_step() const { return failed_step_; }
  [[nodiscard]] const Trajectory& partial() const { return partial_; }

 private:
  std::size_t failed_step_;
  Trajectory partial_;
};

/// Applies `stepper` n_steps times from (q0, p0). Returns n_steps + 1 states.
/// No step-size adaptation: a failing step aborts with IntegrationError.
Trajectory integrate(const Stepper& stepper, const Vector& q0, const Vector& p0, int n_steps);

}  // namespace gsprk
