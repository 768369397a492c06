#include "gsprk/integrator.hpp"

#include <cmath>
#include <sstream>

namespace gsprk {

namespace {

// Stage blocks are stored stage-major in flat unknown vectors: block k of
// stage i occupies [(k*s + i)*n, (k*s + i + 1)*n).
struct Layout {
  Eigen::Index s;
  Eigen::Index n;

  [[nodiscard]] Eigen::Index offset(Eigen::Index block, Eigen::Index stage) const {
    return (block * s + stage) * n;
  }
  [[nodiscard]] Matrix unpack(const Vector& x, Eigen::Index block) const {
    Matrix m(s, n);
    for (Eigen::Index i = 0; i < s; ++i) m.row(i) = x.segment(offset(block, i), n).transpose();
    return m;
  }
  void pack(Vector& x, Eigen::Index block, const Matrix& m) const {
    for (Eigen::Index i = 0; i < s; ++i) x.segment(offset(block, i), n) = m.row(i).transpose();
  }
};

void check_state(const Vector& q0, const Vector& p0, int n) {
  if (q0.size() != n || p0.size() != n) {
    throw InvalidSpecError("initial state has dimension (" + std::to_string(q0.size()) + ", " +
                           std::to_string(p0.size()) + "), system expects " + std::to_string(n));
  }
}

// Row i of the result is f(Q^i, P^i).
template <class F>
Matrix stagewise(const F& f, const Matrix& Q, const Matrix& P) {
  Matrix out(Q.rows(), Q.cols());
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    out.row(i) = f(Vector(Q.row(i).transpose()), Vector(P.row(i).transpose())).transpose();
  }
  return out;
}

// Positions Q^i = q0 + h sum_j A_ij V^j.
Matrix stage_positions(const Vector& q0, double h, const Matrix& A, const Matrix& V) {
  Matrix Q = h * A * V;
  Q.rowwise() += q0.transpose();
  return Q;
}

// V with sum_i M_ij V^i equal to `velocity` at every node.
Matrix interpolating_velocity(const Matrix& M, const Vector& velocity) {
  const Matrix rhs = Vector::Ones(M.cols()) * velocity.transpose();
  return M.transpose().partialPivLu().solve(rhs);
}

}  // namespace

// --- SPRK form ----------------------------------------------------------------

StepResult sprk_step(const HamiltonianSystem& system, const SprkTableau& tableau,
                     const StepperConfig& config, const Vector& q0, const Vector& p0) {
  config.validate();
  check_state(q0, p0, system.n);
  const Layout lay{tableau.s, system.n};
  const double h = config.h;
  const Matrix& a = tableau.a;
  const Matrix& at = tableau.a_tilde;

  auto split = [&](const Vector& x) { return std::pair{lay.unpack(x, 0), lay.unpack(x, 1)}; };

  StageProblem problem;
  problem.residual = [&](const Vector& x) {
    const auto [Q, P] = split(x);
    const Matrix fp = stagewise(system.grad_p, Q, P);
    const Matrix fq = stagewise(system.grad_q, Q, P);
    Matrix rq = Q - h * a * fp;
    rq.rowwise() -= q0.transpose();
    Matrix rp = P + h * at * fq;
    rp.rowwise() -= p0.transpose();
    Vector r(x.size());
    lay.pack(r, 0, rq);
    lay.pack(r, 1, rp);
    return r;
  };
  problem.fixed_point = [&](const Vector& x) {
    const auto [Q, P] = split(x);
    Matrix gq = h * a * stagewise(system.grad_p, Q, P);
    gq.rowwise() += q0.transpose();
    Matrix gp = -h * at * stagewise(system.grad_q, Q, P);
    gp.rowwise() += p0.transpose();
    Vector g(x.size());
    lay.pack(g, 0, gq);
    lay.pack(g, 1, gp);
    return g;
  };

  Vector x0(2 * lay.s * lay.n);
  lay.pack(x0, 0, Matrix(q0.transpose().replicate(lay.s, 1)));
  lay.pack(x0, 1, Matrix(p0.transpose().replicate(lay.s, 1)));
  const StageSolveResult sol = solve_stage_system(problem, x0, config, state_scale(q0, p0));

  auto [Q, P] = split(sol.x);
  const Matrix fp = stagewise(system.grad_p, Q, P);
  const Matrix fq = stagewise(system.grad_q, Q, P);
  StepResult out;
  out.state.q = q0 + h * (fp.transpose() * tableau.b);
  out.state.p = p0 - h * (fq.transpose() * tableau.b);
  out.stages.Q = std::move(Q);
  out.stages.P = std::move(P);
  out.stages.iterations = sol.iterations;
  out.stages.residual = sol.residual;
  return out;
}

// --- Direct Galerkin form -------------------------------------------------------

GalerkinScheme GalerkinScheme::make(const BasisSet& basis, const NodeSet& nodes) {
  GalerkinScheme g{compute_integrals(basis, nodes), {}};
  g.b = induced_quadrature(g.integrals);
  for (Eigen::Index i = 0; i < g.b.size(); ++i) {
    if (std::abs(g.b(i)) < kZeroWeightThreshold) {
      throw InvalidSpecError("induced quadrature weight b_" + std::to_string(i + 1) +
                             " vanishes; basis and nodes are not an admissible pairing");
    }
  }
  return g;
}

StepResult direct_galerkin_step(const HamiltonianSystem& system, const BasisSet& basis,
                                const NodeSet& nodes, const StepperConfig& config,
                                const Vector& q0, const Vector& p0) {
  return direct_galerkin_step(system, GalerkinScheme::make(basis, nodes), config, q0, p0);
}

StepResult direct_galerkin_step(const HamiltonianSystem& system, const GalerkinScheme& scheme,
                                const StepperConfig& config, const Vector& q0, const Vector& p0) {
  config.validate();
  check_state(q0, p0, system.n);
  const Layout lay{scheme.stages(), system.n};
  const double h = config.h;
  const Matrix& A = scheme.integrals.A_psi;
  const Matrix& M = scheme.integrals.M;
  const Vector& B = scheme.integrals.B;
  const Vector& b = scheme.b;
  // W(j,i) = b_i B_j - b_i A_ij, so the momentum equation reads
  // M diag(b) P - B p0^T + h W dH/dq = 0.
  const Matrix W = B * b.transpose() - (b.asDiagonal() * A).transpose();
  const Matrix Mb = M * b.asDiagonal();

  StageProblem problem;
  problem.residual = [&](const Vector& x) {
    const Matrix V = lay.unpack(x, 0);
    const Matrix P = lay.unpack(x, 1);
    const Matrix Q = stage_positions(q0, h, A, V);
    const Matrix rp = Mb * P - B * p0.transpose() + h * W * stagewise(system.grad_q, Q, P);
    const Matrix rv = M.transpose() * V - stagewise(system.grad_p, Q, P);
    Vector r(x.size());
    lay.pack(r, 0, rv);
    lay.pack(r, 1, rp);
    return r;
  };
  const auto Mt_lu = M.transpose().partialPivLu();
  const auto Mb_lu = Mb.partialPivLu();
  problem.fixed_point = [&](const Vector& x) {
    const Matrix V = lay.unpack(x, 0);
    const Matrix P = lay.unpack(x, 1);
    const Matrix Q = stage_positions(q0, h, A, V);
    const Matrix V_new = Mt_lu.solve(stagewise(system.grad_p, Q, P));
    const Matrix P_new =
        Mb_lu.solve(Matrix(B * p0.transpose() - h * W * stagewise(system.grad_q, Q, P)));
    Vector g(x.size());
    lay.pack(g, 0, V_new);
    lay.pack(g, 1, P_new);
    return g;
  };

  Vector x0(2 * lay.s * lay.n);
  lay.pack(x0, 0, interpolating_velocity(M, system.grad_p(q0, p0)));
  lay.pack(x0, 1, Matrix(p0.transpose().replicate(lay.s, 1)));
  const StageSolveResult sol = solve_stage_system(problem, x0, config, state_scale(q0, p0));

  Matrix V = lay.unpack(sol.x, 0);
  Matrix P = lay.unpack(sol.x, 1);
  Matrix Q = stage_positions(q0, h, A, V);
  StepResult out;
  out.state.q = q0 + h * (V.transpose() * B);
  out.state.p = p0 - h * (stagewise(system.grad_q, Q, P).transpose() * b);
  out.stages.Q = std::move(Q);
  out.stages.P = std::move(P);
  out.stages.V = std::move(V);
  out.stages.iterations = sol.iterations;
  out.stages.residual = sol.residual;
  return out;
}

// --- Lagrangian Galerkin form -------------------------------------------------

namespace {

// Velocity with dL/dv(q, v) = p, used only as an initial guess.
Vector velocity_guess(const LagrangianSystem& system, const Vector& q, const Vector& p) {
  StageProblem problem;
  problem.residual = [&](const Vector& v) { return Vector(system.grad_v(q, v) - p); };
  StepperConfig cfg;
  cfg.max_iterations = 25;
  try {
    return solve_stage_system(problem, p, cfg, state_scale(q, p)).x;
  } catch (const NumericalError&) {
    return p;
  }
}

}  // namespace

StepResult lagrangian_galerkin_step(const LagrangianSystem& system, const BasisSet& basis,
                                    const NodeSet& nodes, const StepperConfig& config,
                                    const Vector& q0, const Vector& p0) {
  return lagrangian_galerkin_step(system, GalerkinScheme::make(basis, nodes), config, q0, p0);
}

StepResult lagrangian_galerkin_step(const LagrangianSystem& system, const GalerkinScheme& scheme,
                                    const StepperConfig& config, const Vector& q0,
                                    const Vector& p0) {
  config.validate();
  check_state(q0, p0, system.n);
  const Layout lay{scheme.stages(), system.n};
  const double h = config.h;
  const Matrix& A = scheme.integrals.A_psi;
  const Matrix& M = scheme.integrals.M;
  const Vector& B = scheme.integrals.B;
  const Vector& b = scheme.b;
  const Matrix W = B * b.transpose() - (b.asDiagonal() * A).transpose();
  const Matrix Mb = M * b.asDiagonal();

  StageProblem problem;
  problem.residual = [&](const Vector& x) {
    const Matrix V = lay.unpack(x, 0);
    const Matrix Qdot = lay.unpack(x, 1);
    const Matrix Q = stage_positions(q0, h, A, V);
    const Matrix rv = Mb * stagewise(system.grad_v, Q, Qdot) - B * p0.transpose() -
                      h * W * stagewise(system.grad_q, Q, Qdot);
    const Matrix rd = M.transpose() * V - Qdot;
    Vector r(x.size());
    lay.pack(r, 0, rv);
    lay.pack(r, 1, rd);
    return r;
  };

  const Vector v0 = velocity_guess(system, q0, p0);
  Vector x0(2 * lay.s * lay.n);
  lay.pack(x0, 0, interpolating_velocity(M, v0));
  lay.pack(x0, 1, Matrix(v0.transpose().replicate(lay.s, 1)));
  const StageSolveResult sol = solve_stage_system(problem, x0, config, state_scale(q0, p0));

  Matrix V = lay.unpack(sol.x, 0);
  const Matrix Qdot = lay.unpack(sol.x, 1);
  Matrix Q = stage_positions(q0, h, A, V);
  StepResult out;
  out.state.q = q0 + h * (V.transpose() * B);
  out.state.p = p0 + h * (stagewise(system.grad_q, Q, Qdot).transpose() * b);
  out.stages.P = stagewise(system.grad_v, Q, Qdot);
  out.stages.Q = std::move(Q);
  out.stages.V = std::move(V);
  out.stages.lambda = out.state.p;
  out.stages.iterations = sol.iterations;
  out.stages.residual = sol.residual;
  return out;
}

// --- Steppers -------------------------------------------------------------------

SprkStepper::SprkStepper(HamiltonianSystem system, SprkTableau tableau, StepperConfig config)
    : system_(std::move(system)), tableau_(std::move(tableau)), config_(config) {
  config_.validate();
}

StepResult SprkStepper::step(const Vector& q0, const Vector& p0) const {
  return sprk_step(system_, tableau_, config_, q0, p0);
}

std::string SprkStepper::name() const {
  const auto& pv = tableau_.provenance;
  return "sprk[" + (pv.name.empty() ? pv.basis : pv.name) + "]";
}

GalerkinStepper::GalerkinStepper(HamiltonianSystem system, const BasisSet& basis,
                                 const NodeSet& nodes, StepperConfig config)
    : system_(std::move(system)),
      scheme_(GalerkinScheme::make(basis, nodes)),
      config_(config),
      label_(basis.describe()) {
  config_.validate();
}

StepResult GalerkinStepper::step(const Vector& q0, const Vector& p0) const {
  return direct_galerkin_step(system_, scheme_, config_, q0, p0);
}

LagrangianGalerkinStepper::LagrangianGalerkinStepper(LagrangianSystem system,
                                                     const BasisSet& basis, const NodeSet& nodes,
                                                     StepperConfig config)
    : system_(std::move(system)),
      scheme_(GalerkinScheme::make(basis, nodes)),
      config_(config),
      label_(basis.describe()) {
  config_.validate();
}

StepResult LagrangianGalerkinStepper::step(const Vector& q0, const Vector& p0) const {
  return lagrangian_galerkin_step(system_, scheme_, config_, q0, p0);
}

Trajectory integrate(const Stepper& stepper, const Vector& q0, const Vector& p0, int n_steps) {
  if (n_steps < 1) throw InvalidSpecError("n_steps must be at least 1");
  const double h = stepper.config().h;
  Trajectory traj;
  traj.h = h;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back({q0, p0});
  for (int k = 0; k < n_steps; ++k) {
    const PhasePoint& x = traj.states.back();
    StepResult r;
    try {
      r = stepper.step(x.q, x.p);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << "step " << k << " -> " << (k + 1) << " failed: " << e.what();
      throw IntegrationError(os.str(), static_cast<std::size_t>(k), std::move(traj));
    }
    traj.times.push_back((k + 1) * h);
    traj.states.push_back(std::move(r.state));
    traj.stage_residuals.push_back(r.stages.residual);
    traj.stage_iterations.push_back(r.stages.iterations);
  }
  return traj;
}

}  // namespace gsprk
