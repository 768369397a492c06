#include "gsprk/generating_function.hpp"

#include <cmath>
#include <sstream>

#include "gsprk/errors.hpp"

namespace gsprk {

namespace {

Matrix stagewise(const HamiltonianSystem::Gradient& f, const Matrix& Q, const Matrix& P) {
  Matrix out(Q.rows(), Q.cols());
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    out.row(i) = f(Vector(Q.row(i).transpose()), Vector(P.row(i).transpose())).transpose();
  }
  return out;
}

Vector stage_values(const HamiltonianSystem& sys, const Matrix& Q, const Matrix& P) {
  Vector out(Q.rows());
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    out(i) = sys.value(Vector(Q.row(i).transpose()), Vector(P.row(i).transpose()));
  }
  return out;
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  explicit CompensatedSum(double init = 0.0) : sum_(init) {}
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_;
  double comp_ = 0.0;
};

}  // namespace

GeneratingFunctionEvaluation evaluate_hd_plus(const HamiltonianSystem& system,
                                              const BasisSet& basis, const NodeSet& nodes,
                                              double h, const Vector& q0, const Vector& p1,
                                              const StepperConfig& solver) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw InvalidSpecError("h must be non-negative");
  if (q0.size() != system.n || p1.size() != system.n) {
    throw InvalidSpecError("boundary data dimension does not match the system");
  }
  const GalerkinScheme scheme = GalerkinScheme::make(basis, nodes);
  const Eigen::Index s = scheme.stages();
  const Eigen::Index n = system.n;
  const Matrix& A = scheme.integrals.A_psi;
  const Matrix& M = scheme.integrals.M;
  const Vector& B = scheme.integrals.B;
  const Vector& b = scheme.b;
  const Matrix bA_t = (b.asDiagonal() * A).transpose();  // (j,i) = b_i A_ij
  const Matrix Mb = M * b.asDiagonal();

  auto unpack = [&](const Vector& x, Eigen::Index block) {
    Matrix m(s, n);
    for (Eigen::Index i = 0; i < s; ++i) m.row(i) = x.segment((block * s + i) * n, n).transpose();
    return m;
  };
  auto pack = [&](Vector& x, Eigen::Index block, const Matrix& m) {
    for (Eigen::Index i = 0; i < s; ++i) x.segment((block * s + i) * n, n) = m.row(i).transpose();
  };
  auto positions = [&](const Matrix& V) {
    Matrix Q = h * A * V;
    Q.rowwise() += q0.transpose();
    return Q;
  };

  // dK/dV_j / h  = p1 B_j - sum_i b_i (P^i psi_j(c_i) - h A_ij dH/dq(Q^i,P^i))
  // dK/dP_j / (h b_j) = sum_i psi_i(c_j) V^i - dH/dp(Q^j,P^j)
  StageProblem problem;
  problem.residual = [&](const Vector& x) {
    const Matrix V = unpack(x, 0);
    const Matrix P = unpack(x, 1);
    const Matrix Q = positions(V);
    const Matrix rp = B * p1.transpose() - Mb * P + h * bA_t * stagewise(system.grad_q, Q, P);
    const Matrix rv = M.transpose() * V - stagewise(system.grad_p, Q, P);
    Vector r(x.size());
    pack(r, 0, rv);
    pack(r, 1, rp);
    return r;
  };
  const auto Mt_lu = M.transpose().partialPivLu();
  const auto Mb_lu = Mb.partialPivLu();
  problem.fixed_point = [&](const Vector& x) {
    const Matrix V = unpack(x, 0);
    const Matrix P = unpack(x, 1);
    const Matrix Q = positions(V);
    Vector g(x.size());
    pack(g, 0, Mt_lu.solve(stagewise(system.grad_p, Q, P)));
    pack(g, 1, Mb_lu.solve(Matrix(B * p1.transpose() + h * bA_t * stagewise(system.grad_q, Q, P))));
    return g;
  };

  Vector x0(2 * s * n);
  const Matrix v_guess = Vector::Ones(s) * system.grad_p(q0, p1).transpose();
  pack(x0, 0, Mt_lu.solve(v_guess));
  pack(x0, 1, Matrix(p1.transpose().replicate(s, 1)));
  const StageSolveResult sol = solve_stage_system(problem, x0, solver, state_scale(q0, p1));

  GeneratingFunctionEvaluation out;
  Matrix V = unpack(sol.x, 0);
  Matrix P = unpack(sol.x, 1);
  Matrix Q = positions(V);
  const Matrix fq = stagewise(system.grad_q, Q, P);
  const Matrix fp = stagewise(system.grad_p, Q, P);
  const Vector H = stage_values(system, Q, P);
  const Matrix a = M.partialPivLu().solve(A.transpose()).transpose();  // A M^{-T}

  out.value = p1.dot(q0) - h * h * ((b.asDiagonal() * a).cwiseProduct(fq * fp.transpose())).sum() +
              h * b.dot(H);

  const Vector qh = q0 + h * (V.transpose() * B);
  const Matrix qdot = M.transpose() * V;  // row i: qdot_d(c_i h)
  double bracket = 0.0;
  for (Eigen::Index i = 0; i < s; ++i) {
    bracket += b(i) * (P.row(i).dot(qdot.row(i)) - H(i));
  }
  out.value_direct = p1.dot(qh) - h * bracket;
  out.p0_implied = p1 + h * (fq.transpose() * b);
  out.q1_implied = qh;
  out.stages.Q = std::move(Q);
  out.stages.P = std::move(P);
  out.stages.V = std::move(V);
  out.stages.iterations = sol.iterations;
  out.stages.residual = sol.residual;
  return out;
}

Type2IdentityDefects verify_type2_identities(const HamiltonianSystem& system,
                                             const BasisSet& basis, const NodeSet& nodes,
                                             double h, const Vector& q0, const Vector& p0) {
  Type2IdentityDefects out;
  if (h == 0.0) {
    out.step = {q0, p0};
  } else {
    StepperConfig cfg;
    cfg.h = h;
    out.step = direct_galerkin_step(system, basis, nodes, cfg, q0, p0).state;
  }
  const Vector& q1 = out.step.q;
  const Vector& p1 = out.step.p;
  auto hd = [&](const Vector& q, const Vector& p) {
    return evaluate_hd_plus(system, basis, nodes, h, q, p).value;
  };
  for (Eigen::Index k = 0; k < q0.size(); ++k) {
    const double eps = 1e-6 * std::max(1.0, std::abs(q0(k)));
    Vector qp = q0, qm = q0;
    qp(k) += eps;
    qm(k) -= eps;
    const double d1 = (hd(qp, p1) - hd(qm, p1)) / (2.0 * eps);
    out.p0 = std::max(out.p0, std::abs(d1 - p0(k)));
  }
  for (Eigen::Index k = 0; k < p1.size(); ++k) {
    const double eps = 1e-6 * std::max(1.0, std::abs(p1(k)));
    Vector pp = p1, pm = p1;
    pp(k) += eps;
    pm(k) -= eps;
    const double d2 = (hd(q0, pp) - hd(q0, pm)) / (2.0 * eps);
    out.q1 = std::max(out.q1, std::abs(d2 - q1(k)));
  }
  return out;
}

std::vector<double> hd_along(const HamiltonianSystem& system, const BasisSet& basis,
                             const NodeSet& nodes, const Trajectory& trajectory) {
  std::vector<double> out;
  if (trajectory.size() < 2) return out;
  out.reserve(trajectory.size() - 1);
  for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
    out.push_back(evaluate_hd_plus(system, basis, nodes, trajectory.h, trajectory.states[k].q,
                                   trajectory.states[k + 1].p)
                      .value);
  }
  return out;
}

DiscreteActionAccumulator accumulate_action(const Trajectory& trajectory,
                                            const std::vector<double>& hd_values) {
  if (trajectory.size() == 0 || hd_values.size() + 1 != trajectory.size()) {
    throw InvalidSpecError("accumulate_action: expected " +
                           std::to_string(trajectory.size() ? trajectory.size() - 1 : 0) +
                           " generating-function values, got " +
                           std::to_string(hd_values.size()));
  }
  DiscreteActionAccumulator acc;
  const auto& x = trajectory.states;
  acc.q0_fixed = x.front().q;
  CompensatedSum sum(x.front().p.dot(x.front().q));
  acc.S_values.push_back(sum.value());
  for (std::size_t k = 0; k < hd_values.size(); ++k) {
    sum.add(hd_values[k]);
    sum.add(-x[k].p.dot(x[k].q));
    acc.S_values.push_back(sum.value());
  }
  return acc;
}

double direct_action(const Trajectory& trajectory, const std::vector<double>& hd_values,
                     std::size_t k) {
  if (k >= trajectory.size() || hd_values.size() < k) {
    throw InvalidSpecError("direct_action: index out of range");
  }
  const auto& x = trajectory.states;
  double tail = 0.0;
  for (std::size_t l = 0; l < k; ++l) tail += x[l + 1].p.dot(x[l + 1].q) - hd_values[l];
  return x[k].p.dot(x[k].q) - tail;
}

namespace {

// Trajectory of k Galerkin steps from (q0, p0); k = 0 gives the single state.
Trajectory run_steps(const Stepper& stepper, const Vector& q0, const Vector& p0, int k) {
  if (k == 0) {
    Trajectory t;
    t.h = stepper.config().h;
    t.times = {0.0};
    t.states = {{q0, p0}};
    return t;
  }
  return integrate(stepper, q0, p0, k);
}

// Secant iteration on the initial momentum so that the k-th momentum hits
// `target`. Returns the shot trajectory.
Trajectory shoot(const Stepper& stepper, const Vector& q0, double p0_guess, double p_k_guess,
                 double target, int k, int& iterations) {
  constexpr int kMaxIterations = 50;
  auto momentum_at_k = [&](double p0) {
    return run_steps(stepper, q0, Vector::Constant(1, p0), k);
  };
  double x_prev = p0_guess;
  Trajectory t_prev = momentum_at_k(x_prev);
  double g_prev = t_prev.back().p(0) - target;
  const double tol = 1e-15 * std::max(1.0, std::abs(target));
  if (std::abs(g_prev) <= tol) {
    iterations = 0;
    return t_prev;
  }
  // First secant point: assume dp_k/dp0 ~ 1.
  double x = p0_guess + (target - p_k_guess);
  if (x == x_prev) x = p0_guess + 1e-8 * std::max(1.0, std::abs(p0_guess));
  for (int it = 1; it <= kMaxIterations; ++it) {
    Trajectory t = momentum_at_k(x);
    const double g = t.back().p(0) - target;
    if (std::abs(g) <= tol || g == g_prev) {
      iterations = it;
      return t;
    }
    const double x_next = x - g * (x - x_prev) / (g - g_prev);
    if (!std::isfinite(x_next)) break;
    x_prev = x;
    g_prev = g;
    x = x_next;
    if (std::abs(x - x_prev) <= 4e-16 * std::max(1.0, std::abs(x))) {
      iterations = it;
      return momentum_at_k(x);
    }
  }
  std::ostringstream os;
  os << "shooting for p_" << k << " = " << target
     << " did not converge; the discrete flow may not be invertible at this step size";
  throw NumericalError(os.str());
}

}  // namespace

HamiltonJacobiCheck discrete_hj_check(const HamiltonianSystem& system, const BasisSet& basis,
                                      const NodeSet& nodes, double h, const Vector& q0,
                                      const Vector& p0, int k) {
  if (system.n != 1) {
    throw InvalidSpecError("discrete Hamilton-Jacobi check supports scalar systems (n = 1) only");
  }
  if (k < 0) throw InvalidSpecError("step index k must be non-negative");
  StepperConfig cfg;
  cfg.h = h;
  const GalerkinStepper stepper(system, basis, nodes, cfg);

  const Trajectory base = integrate(stepper, q0, p0, k + 1);
  const PhasePoint& xk = base.states[static_cast<std::size_t>(k)];
  const double pk = xk.p(0);

  HamiltonJacobiCheck out;
  out.q_k = xk.q(0);

  auto S_at = [&](double target) {
    int iterations = 0;
    const Trajectory t = shoot(stepper, q0, p0(0), pk, target, k, iterations);
    out.max_secant_iterations = std::max(out.max_secant_iterations, iterations);
    const std::vector<double> hd = hd_along(system, basis, nodes, t);
    return direct_action(t, hd, static_cast<std::size_t>(k));
  };
  const double eps = 1e-6 * std::max(1.0, std::abs(pk));
  out.dS = (S_at(pk + eps) - S_at(pk - eps)) / (2.0 * eps);
  out.gradient_defect = std::abs(out.dS - out.q_k);

  const std::vector<double> hd = hd_along(system, basis, nodes, base);
  const DiscreteActionAccumulator acc = accumulate_action(base, hd);
  const auto ku = static_cast<std::size_t>(k);
  const double lhs = acc.S_values[ku + 1] - acc.S_values[ku];
  const Vector p_next = base.states[ku + 1].p;
  const double rhs =
      evaluate_hd_plus(system, basis, nodes, h, Vector::Constant(1, out.dS), p_next).value -
      pk * out.dS;
  out.hj_residual = std::abs(lhs - rhs);
  return out;
}

}  // namespace gsprk
