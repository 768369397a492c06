#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsprk/integrator.hpp"
#include "gsprk/systems.hpp"
#include "gsprk/tableau.hpp"
#include "gsprk/types.hpp"

namespace gsprk {

struct DiagnosticsReport {
  std::optional<double> symplecticity_defect;
  std::vector<double> energy_series;                 // H(q_k,p_k) - H(q_0,p_0)
  std::optional<std::vector<double>> momentum_series;  // J(q_k,p_k) - J(q_0,p_0)
  std::optional<double> order_estimate;
};

/// Canonical Poisson matrix [[0, I], [-I, 0]] of size 2n.
Matrix canonical_symplectic_matrix(int n);

/// Central-difference Jacobian of the one-step map at `state`, step
/// 1e-6 max(1, |state|_inf), ordered (q, p).
Matrix step_jacobian(const Stepper& stepper, const PhasePoint& state);

/// ||J^T Omega J - Omega||_inf (max row sum) of the finite-difference step
/// Jacobian. Solver failures at any perturbation propagate.
double symplecticity_defect(const Stepper& stepper, const PhasePoint& state);
double symplecticity_defect(const HamiltonianSystem& system, const SprkTableau& tableau,
                            const StepperConfig& config, const PhasePoint& state);

std::vector<double> energy_series(const HamiltonianSystem& system, const Trajectory& trajectory);
std::vector<double> momentum_series(const Trajectory& trajectory,
                                    const SymmetryGenerator& generator);

/// max_k |J(q_k,p_k) - J(q_0,p_0)| with J(q,p) = p.(G q).
/// Throws InvalidSpecError when G does not match the state dimension.
double momentum_drift(const Trajectory& trajectory, const SymmetryGenerator& generator);

struct EnergyDriftSummary {
  double max_abs_error = 0.0;
  double head_mean = 0.0;  // mean |dH| over the first window
  double tail_mean = 0.0;  // mean |dH| over the last window
  [[nodiscard]] double window_difference() const { return std::abs(tail_mean - head_mean); }
};

/// Windowed secular-drift measure; `window_fraction` of the series at each end.
EnergyDriftSummary energy_drift(const std::vector<double>& energy_errors,
                                double window_fraction = 0.05);

/// Reference solution at time t from (q0, p0).
using ReferenceSolution = std::function<PhasePoint(const Vector&, const Vector&, double)>;

/// The system's exact flow when it has one, otherwise nullopt.
std::optional<ReferenceSolution> exact_reference(const HamiltonianSystem& system);

/// Reference for systems without an exact flow: the two-stage Gauss method
/// (Chebyshev s = 2 Galerkin tableau) at step h_ref, with a Richardson check
/// against h_ref / 2 that throws NumericalError if the two disagree beyond
/// `tolerance`.
ReferenceSolution gauss_reference(const HamiltonianSystem& system, double h_ref,
                                  double tolerance = 1e-11);

struct ConvergenceStudy {
  std::vector<double> step_sizes;
  std::vector<double> errors;  // |state_N - reference(T)|_inf
  /// Least-squares slope of log(error) against log(h) over errors above the
  /// rounding floor.
  double slope = 0.0;
  std::size_t points_used = 0;
};

inline constexpr double kRoundingFloor = 1e-13;

/// Runs the SPRK method to time T for each h and fits the order.
/// Preconditions (InvalidSpecError): at least 3 step sizes, each dividing T.
ConvergenceStudy convergence_order(const HamiltonianSystem& system, const SprkTableau& tableau,
                                   const Vector& q0, const Vector& p0, double T,
                                   const std::vector<double>& h_list,
                                   const ReferenceSolution& reference);

/// Same, with the system's exact flow; InvalidSpecError when there is none.
ConvergenceStudy convergence_order(const HamiltonianSystem& system, const SprkTableau& tableau,
                                   const Vector& q0, const Vector& p0, double T,
                                   const std::vector<double>& h_list);

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

/// CSV `k,t,energy_error,momentum_error` followed by `#`-prefixed summary
/// lines. The momentum column is empty when no series is present.
std::string render_report_csv(const Trajectory& trajectory, const DiagnosticsReport& report);

}  // namespace gsprk
