#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsprk/types.hpp"

namespace gsprk {

/// Linear symmetry action with infinitesimal generator xi_Q(q) = G q. The
/// cotangent-lifted momentum map is J(q, p) = p . (G q).
struct SymmetryGenerator {
  Matrix G;

  [[nodiscard]] double momentum(const Vector& q, const Vector& p) const { return p.dot(G * q); }
};

/// Autonomous Hamiltonian H(q, p) on T*R^n with analytic gradients.
struct HamiltonianSystem {
  using Scalar = std::function<double(const Vector&, const Vector&)>;
  using Gradient = std::function<Vector(const Vector&, const Vector&)>;
  using Flow = std::function<PhasePoint(const Vector&, const Vector&, double)>;

  std::string name;
  int n = 0;
  Scalar value;
  Gradient grad_q;
  Gradient grad_p;
  /// d^2H/dp^2 invertible everywhere, i.e. a Lagrangian exists.
  bool hyperregular = false;
  std::optional<Flow> exact_flow;
  /// Symmetry under which H is invariant (used for momentum diagnostics).
  std::optional<SymmetryGenerator> symmetry;

  [[nodiscard]] double energy(const PhasePoint& x) const { return value(x.q, x.p); }
};

/// L(q, v) with v the velocity.
struct LagrangianSystem {
  using Scalar = std::function<double(const Vector&, const Vector&)>;
  using Gradient = std::function<Vector(const Vector&, const Vector&)>;

  std::string name;
  int n = 0;
  Scalar value;
  Gradient grad_q;
  Gradient grad_v;
};

std::vector<std::string> builtin_names();

/// One of harmonic, pendulum, kepler2d, bilinear, point_vortex_pair.
/// Throws InvalidSpecError for anything else.
HamiltonianSystem builtin(const std::string& name);

/// Initial state used when none is given: harmonic and pendulum (1, 0),
/// kepler2d ((1,0), (0,1.2)), bilinear (1, 1), point_vortex_pair with the
/// vortices at (0.5, 0) and (-0.5, 0).
PhasePoint default_initial_state(const std::string& name);

/// Lagrangian L(q, v) = p.v - H(q, p) with p solving v = dH/dp(q, p), found by
/// Newton iteration from p = v. Gradients use dL/dq = -dH/dq, dL/dv = p.
/// Throws DegenerateSystemError when `hsys` is not hyperregular and
/// NumericalError when the fiber-derivative inversion fails.
LagrangianSystem legendre_to_lagrangian(const HamiltonianSystem& hsys);

/// Solves v = dH/dp(q, p) for p (Newton from p = v, tolerance 1e-12,
/// at most 25 iterations).
Vector invert_fiber_derivative(const HamiltonianSystem& hsys, const Vector& q, const Vector& v);

/// Max over samples and components of |analytic - central difference|
/// gradient, difference step 1e-6 max(1, |x|).
double check_gradients(const HamiltonianSystem& system, const std::vector<PhasePoint>& samples);
/// Same for a Lagrangian; samples hold (q, v) in PhasePoint::q / ::p.
double check_gradients(const LagrangianSystem& system, const std::vector<PhasePoint>& samples);

/// Rotation generator [[0,-1],[1,0]] for planar problems.
SymmetryGenerator planar_rotation();

}  // namespace gsprk
