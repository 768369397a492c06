#pragma once

#include <vector>

#include "gsprk/basis.hpp"
#include "gsprk/integrator.hpp"
#include "gsprk/systems.hpp"
#include "gsprk/types.hpp"

namespace gsprk {

/// The Galerkin discrete right Hamiltonian H_d^+(q0, p1) together with the
/// stage solution that extremises it.
struct GeneratingFunctionEvaluation {
  /// p1.q0 - h^2 sum_ij b_i a_ij dH/dq(Q^i,P^i).dH/dp(Q^j,P^j)
  ///       + h sum_i b_i H(Q^i,P^i)
  double value = 0.0;
  /// p1.q_d(h) - h sum_i b_i [P^i.qdot_d(c_i h) - H(Q^i,P^i)], the extremised
  /// functional itself. Equals `value` at a converged stage solution.
  double value_direct = 0.0;
  StageSolution stages;
  Vector p0_implied;  // D_1 H_d^+ = p1 + h sum_i b_i dH/dq(Q^i,P^i)
  Vector q1_implied;  // D_2 H_d^+ = q0 + h sum_i B_i V^i
};

/// Solves the stationarity conditions of the Galerkin functional with the
/// boundary data (q0, p1) held fixed, in the unknowns (V^i, P^i). The first
/// block is divided by h, so h = 0 is admissible and yields the identity
/// generating function p1.q0.
GeneratingFunctionEvaluation evaluate_hd_plus(const HamiltonianSystem& system,
                                              const BasisSet& basis, const NodeSet& nodes,
                                              double h, const Vector& q0, const Vector& p1,
                                              const StepperConfig& solver = {});

struct Type2IdentityDefects {
  double p0 = 0.0;  // |D_1 H_d^+(q0, p1) - p0|_inf
  double q1 = 0.0;  // |D_2 H_d^+(q0, p1) - q1|_inf
  PhasePoint step;  // (q1, p1) from the Galerkin step
};

/// Takes one Galerkin step (q0, p0) -> (q1, p1) and compares central
/// differences of H_d^+ (step 1e-6 max(1, |x|)) with p0 and q1.
Type2IdentityDefects verify_type2_identities(const HamiltonianSystem& system,
                                             const BasisSet& basis, const NodeSet& nodes,
                                             double h, const Vector& q0, const Vector& p0);

/// H_d^+(q_k, p_{k+1}) for every step of a trajectory.
std::vector<double> hd_along(const HamiltonianSystem& system, const BasisSet& basis,
                             const NodeSet& nodes, const Trajectory& trajectory);

/// Values S_d^k of the discrete extremum function along a trajectory.
struct DiscreteActionAccumulator {
  std::vector<double> S_values;
  Vector q0_fixed;
};

/// Recurrence S^{k+1} = S^k + H_d^+(q_k, p_{k+1}) - p_k.q_k from S^0 = p0.q0,
/// with compensated summation. Throws InvalidSpecError unless
/// hd_values.size() + 1 == trajectory.size().
DiscreteActionAccumulator accumulate_action(const Trajectory& trajectory,
                                            const std::vector<double>& hd_values);

/// Direct evaluation S^k = p_k.q_k - sum_{l<k} [p_{l+1}.q_{l+1} - H_d^+(q_l, p_{l+1})].
double direct_action(const Trajectory& trajectory, const std::vector<double>& hd_values,
                     std::size_t k);

struct HamiltonJacobiCheck {
  double q_k = 0.0;
  double dS = 0.0;               // central difference of S_d^k in p_k
  double gradient_defect = 0.0;  // |dS - q_k|
  /// |(S^{k+1} - S^k) - (H_d^+(dS, p_{k+1}) - p_k dS)|
  double hj_residual = 0.0;
  int max_secant_iterations = 0;
};

/// Discrete Type II Hamilton-Jacobi check for scalar (n = 1) systems.
///
/// S_d^k is treated as a function of p_k with q0 fixed: for p_k +/- eps the
/// initial momentum is found by secant shooting on the k-step Galerkin map,
/// S_d^k is evaluated along the shot trajectory, and the central difference
/// is compared with q_k. Also evaluates the HJ recurrence residual at k.
/// Throws InvalidSpecError for n != 1 and NumericalError when shooting fails.
HamiltonJacobiCheck discrete_hj_check(const HamiltonianSystem& system, const BasisSet& basis,
                                      const NodeSet& nodes, double h, const Vector& q0,
                                      const Vector& p0, int k);

}  // namespace gsprk
