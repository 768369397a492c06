#include "gsprk/systems.hpp"

#include <cmath>
#include <numbers>

#include "gsprk/errors.hpp"

namespace gsprk {

namespace {

constexpr double kPi = std::numbers::pi;

Vector scalar(double x) { return Vector::Constant(1, x); }

HamiltonianSystem harmonic() {
  HamiltonianSystem h;
  h.name = "harmonic";
  h.n = 1;
  h.value = [](const Vector& q, const Vector& p) { return 0.5 * (p.squaredNorm() + q.squaredNorm()); };
  h.grad_q = [](const Vector& q, const Vector&) { return Vector(q); };
  h.grad_p = [](const Vector&, const Vector& p) { return Vector(p); };
  h.hyperregular = true;
  h.exact_flow = [](const Vector& q0, const Vector& p0, double t) {
    const double c = std::cos(t), s = std::sin(t);
    return PhasePoint{c * q0 + s * p0, -s * q0 + c * p0};
  };
  return h;
}

HamiltonianSystem pendulum() {
  HamiltonianSystem h;
  h.name = "pendulum";
  h.n = 1;
  h.value = [](const Vector& q, const Vector& p) { return 0.5 * p(0) * p(0) - std::cos(q(0)); };
  h.grad_q = [](const Vector& q, const Vector&) { return scalar(std::sin(q(0))); };
  h.grad_p = [](const Vector&, const Vector& p) { return Vector(p); };
  h.hyperregular = true;
  return h;
}

HamiltonianSystem kepler2d() {
  HamiltonianSystem h;
  h.name = "kepler2d";
  h.n = 2;
  h.value = [](const Vector& q, const Vector& p) { return 0.5 * p.squaredNorm() - 1.0 / q.norm(); };
  h.grad_q = [](const Vector& q, const Vector&) {
    const double r = q.norm();
    return Vector(q / (r * r * r));
  };
  h.grad_p = [](const Vector&, const Vector& p) { return Vector(p); };
  h.hyperregular = true;
  h.symmetry = planar_rotation();
  return h;
}

HamiltonianSystem bilinear() {
  HamiltonianSystem h;
  h.name = "bilinear";
  h.n = 1;
  h.value = [](const Vector& q, const Vector& p) { return q(0) * p(0); };
  h.grad_q = [](const Vector&, const Vector& p) { return Vector(p); };
  h.grad_p = [](const Vector& q, const Vector&) { return Vector(q); };
  h.hyperregular = false;
  h.exact_flow = [](const Vector& q0, const Vector& p0, double t) {
    return PhasePoint{q0 * std::exp(t), p0 * std::exp(-t)};
  };
  return h;
}

// Two unit-circulation point vortices at (q_k, p_k), k = 1, 2 (x as q, y as p).
HamiltonianSystem point_vortex_pair() {
  HamiltonianSystem h;
  h.name = "point_vortex_pair";
  h.n = 2;
  h.value = [](const Vector& q, const Vector& p) {
    const double dx = q(0) - q(1), dy = p(0) - p(1);
    return -std::log(dx * dx + dy * dy) / (4.0 * kPi);
  };
  h.grad_q = [](const Vector& q, const Vector& p) {
    const double dx = q(0) - q(1), dy = p(0) - p(1);
    const double g = -dx / (2.0 * kPi * (dx * dx + dy * dy));
    Vector out(2);
    out << g, -g;
    return out;
  };
  h.grad_p = [](const Vector& q, const Vector& p) {
    const double dx = q(0) - q(1), dy = p(0) - p(1);
    const double g = -dy / (2.0 * kPi * (dx * dx + dy * dy));
    Vector out(2);
    out << g, -g;
    return out;
  };
  h.hyperregular = false;
  // The separation (dx, dy) rotates rigidly at rate 1/(pi r^2) about the
  // fixed centre of vorticity.
  h.exact_flow = [](const Vector& q0, const Vector& p0, double t) {
    const double cx = 0.5 * (q0(0) + q0(1)), cy = 0.5 * (p0(0) + p0(1));
    const double dx = q0(0) - q0(1), dy = p0(0) - p0(1);
    const double omega = 1.0 / (kPi * (dx * dx + dy * dy));
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double rx = c * dx - s * dy, ry = s * dx + c * dy;
    Vector q(2), p(2);
    q << cx + 0.5 * rx, cx - 0.5 * rx;
    p << cy + 0.5 * ry, cy - 0.5 * ry;
    return PhasePoint{q, p};
  };
  return h;
}

template <class F>
double fd_defect(const F& value, const Vector& x, const Vector& y, const Vector& analytic,
                 bool wrt_first) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < (wrt_first ? x : y).size(); ++k) {
    Vector xp = x, xm = x, yp = y, ym = y;
    double& base = wrt_first ? xp(k) : yp(k);
    const double eps = 1e-6 * std::max(1.0, std::abs(base));
    if (wrt_first) {
      xp(k) += eps;
      xm(k) -= eps;
    } else {
      yp(k) += eps;
      ym(k) -= eps;
    }
    const double fd = (value(xp, yp) - value(xm, ym)) / (2.0 * eps);
    worst = std::max(worst, std::abs(fd - analytic(k)));
  }
  return worst;
}

template <class System, class GradA, class GradB>
double gradient_defect(const System& sys, const GradA& ga, const GradB& gb,
                       const std::vector<PhasePoint>& samples) {
  double worst = 0.0;
  for (const auto& x : samples) {
    worst = std::max(worst, fd_defect(sys.value, x.q, x.p, ga(x.q, x.p), true));
    worst = std::max(worst, fd_defect(sys.value, x.q, x.p, gb(x.q, x.p), false));
  }
  return worst;
}

}  // namespace

SymmetryGenerator planar_rotation() {
  Matrix g(2, 2);
  g << 0.0, -1.0, 1.0, 0.0;
  return SymmetryGenerator{g};
}

std::vector<std::string> builtin_names() {
  return {"harmonic", "pendulum", "kepler2d", "bilinear", "point_vortex_pair"};
}

HamiltonianSystem builtin(const std::string& name) {
  if (name == "harmonic") return harmonic();
  if (name == "pendulum") return pendulum();
  if (name == "kepler2d") return kepler2d();
  if (name == "bilinear") return bilinear();
  if (name == "point_vortex_pair") return point_vortex_pair();
  throw InvalidSpecError("unknown system '" + name + "'");
}

PhasePoint default_initial_state(const std::string& name) {
  auto vec = [](std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
  };
  if (name == "harmonic" || name == "pendulum") return {vec({1.0}), vec({0.0})};
  if (name == "kepler2d") return {vec({1.0, 0.0}), vec({0.0, 1.2})};
  if (name == "bilinear") return {vec({1.0}), vec({1.0})};
  if (name == "point_vortex_pair") return {vec({0.5, -0.5}), vec({0.0, 0.0})};
  throw InvalidSpecError("unknown system '" + name + "'");
}

Vector invert_fiber_derivative(const HamiltonianSystem& hsys, const Vector& q, const Vector& v) {
  constexpr double kTol = 1e-12;
  constexpr int kMaxIterations = 25;
  Vector p = v;
  const auto n = v.size();
  for (int it = 0; it <= kMaxIterations; ++it) {
    const Vector r = hsys.grad_p(q, p) - v;
    if (!r.allFinite()) break;
    if (r.cwiseAbs().maxCoeff() <= kTol * std::max(1.0, v.cwiseAbs().maxCoeff())) return p;
    if (it == kMaxIterations) break;
    Matrix jac(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double eps = 1e-7 * std::max(1.0, std::abs(p(k)));
      Vector pp = p, pm = p;
      pp(k) += eps;
      pm(k) -= eps;
      jac.col(k) = (hsys.grad_p(q, pp) - hsys.grad_p(q, pm)) / (2.0 * eps);
    }
    p -= jac.partialPivLu().solve(r);
  }
  throw NumericalError("Legendre transform inversion failed for system '" + hsys.name + "'");
}

LagrangianSystem legendre_to_lagrangian(const HamiltonianSystem& hsys) {
  if (!hsys.hyperregular) {
    throw DegenerateSystemError("no Lagrangian exists: Hamiltonian '" + hsys.name +
                                "' is not hyperregular");
  }
  LagrangianSystem l;
  l.name = hsys.name + "_lagrangian";
  l.n = hsys.n;
  l.value = [hsys](const Vector& q, const Vector& v) {
    const Vector p = invert_fiber_derivative(hsys, q, v);
    return p.dot(v) - hsys.value(q, p);
  };
  l.grad_q = [hsys](const Vector& q, const Vector& v) {
    return Vector(-hsys.grad_q(q, invert_fiber_derivative(hsys, q, v)));
  };
  l.grad_v = [hsys](const Vector& q, const Vector& v) {
    return invert_fiber_derivative(hsys, q, v);
  };
  return l;
}

double check_gradients(const HamiltonianSystem& system, const std::vector<PhasePoint>& samples) {
  return gradient_defect(system, system.grad_q, system.grad_p, samples);
}

double check_gradients(const LagrangianSystem& system, const std::vector<PhasePoint>& samples) {
  return gradient_defect(system, system.grad_q, system.grad_v, samples);
}

}  // namespace gsprk
