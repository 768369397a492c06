// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gsprk/diagnostics.hpp"
#include "gsprk/errors.hpp"
#include "gsprk/generating_function.hpp"
#include "gsprk/methods.hpp"

using namespace gsprk;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g", detail.empty() ? "" : " ", what.c_str(), value);
    detail += buf;
    if (!ok) {
      pass = false;
      detail += "(!)";
    }
  }
};

StepperConfig with_h(double h) {
  StepperConfig cfg;
  cfg.h = h;
  return cfg;
}

Matrix mat(int s, std::initializer_list<double> v) {
  Matrix m(s, s);
  auto it = v.begin();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) m(i, j) = *it++;
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double distance(const PhasePoint& a, const PhasePoint& b) {
  return std::max((a.q - b.q).cwiseAbs().maxCoeff(), (a.p - b.p).cwiseAbs().maxCoeff());
}

double tableau_error(const SprkTableau& t, const Vector& b, const Matrix& a, const Matrix& at) {
  return std::max({diff(t.b, b), diff(t.a, a), diff(t.a_tilde, at)});
}

Outcome criterion_1() {
  Outcome o;
  const BasisSet one = BasisSet::monomial(1);
  double ex1 = 0.0;
  ex1 = std::max(ex1, tableau_error(build_tableau(one, NodeSet({0.0})), vec({1}), mat(1, {0}), mat(1, {1})));
  ex1 = std::max(ex1, tableau_error(build_tableau(one, NodeSet({0.5})), vec({1}), mat(1, {0.5}), mat(1, {0.5})));
  ex1 = std::max(ex1, tableau_error(build_tableau(one, NodeSet({1.0})), vec({1}), mat(1, {1}), mat(1, {0})));
  o.require(ex1 < 1e-14, "ex1", ex1);

  const SprkTableau sv = build_tableau(BasisSet::trigonometric(2), NodeSet({0.0, 1.0}));
  const double ex2 = tableau_error(sv, vec({0.5, 0.5}), mat(2, {0, 0, 0.5, 0.5}), mat(2, {0.5, 0, 0.5, 0}));
  o.require(ex2 < 1e-14, "ex2", ex2);

  const double w = (kPi - 2) / (2 * kPi);
  const SprkTableau t3 = build_tableau(BasisSet::trigonometric(3), NodeSet({0.0, 0.5, 1.0}));
  const double ex3 = tableau_error(
      t3, vec({w, 2 / kPi, w}),
      mat(3, {0, 0, 0, 0.25, 1 / kPi, (kPi - 4) / (4 * kPi), w, 2 / kPi, w}),
      mat(3, {w, (kPi - 4) / (kPi * kPi - 2 * kPi), 0, w, 1 / kPi, 0, w, 1 / (kPi - 2), 0}));
  o.require(ex3 < 1e-12, "ex3", ex3);

  const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0), s6 = 1.0 / 6.0;
  double ex4 = tableau_error(build_tableau(BasisSet::lagrange(chebyshev_nodes(1)), chebyshev_nodes(1)),
                             vec({1}), mat(1, {0.5}), mat(1, {0.5}));
  const Matrix gauss2 = mat(2, {0.25, 0.25 - r3 / 6, 0.25 + r3 / 6, 0.25});
  const SprkTableau c2 = build_tableau(BasisSet::lagrange(chebyshev_nodes(2)), chebyshev_nodes(2));
  ex4 = std::max(ex4, tableau_error(c2, vec({0.5, 0.5}), gauss2, gauss2));
  ex4 = std::max(ex4, diff(c2.c, vec({0.5 - r3 / 6, 0.5 + r3 / 6})));
  const SprkTableau c3 = build_tableau(BasisSet::lagrange(chebyshev_nodes(3)), chebyshev_nodes(3));
  ex4 = std::max(ex4, tableau_error(c3, vec({1.0 / 3, 1.0 / 3, 1.0 / 3}),
                                    mat(3, {s6 + r2 / 48, s6 - r2 / 6, s6 - 5 * r2 / 48,  //
                                            s6 + r2 / 8, s6, s6 - r2 / 8,                 //
                                            s6 + 5 * r2 / 48, s6 + r2 / 6, s6 - r2 / 48}),
                                    mat(3, {s6 - r2 / 48, s6 - r2 / 8, s6 - 5 * r2 / 48,  //
                                            s6 + r2 / 6, s6, s6 - r2 / 6,                 //
                                            s6 + 5 * r2 / 48, s6 + r2 / 8, s6 + r2 / 48})));
  o.require(ex4 < 1e-12, "ex4", ex4);
  return o;
}

Outcome criterion_2() {
  Outcome o;
  double cons = 0.0, compat = 0.0;
  for (const auto& name : preset_names()) {
    const SprkTableau t = resolve_preset(name).tableau;
    cons = std::max(cons, std::abs(t.b.sum() - 1.0));
    for (int i = 0; i < t.s; ++i)
      for (int j = 0; j < t.s; ++j)
        compat = std::max(compat, std::abs(t.b(i) * t.a_tilde(i, j) + t.b(j) * t.a(j, i) - t.b(i) * t.b(j)));
  }
  o.require(cons < 1e-13, "consistency", cons);
  o.require(compat < 1e-13, "compatibility", compat);
  return o;
}

Outcome criterion_3() {
  Outcome o;
  double worst = 0.0;
  for (const auto& preset : preset_names()) {
    for (const std::string sys : {"harmonic", "pendulum", "kepler2d", "bilinear"}) {
      worst = std::max(worst, symplecticity_defect(builtin(sys), resolve_preset(preset).tableau,
                                                   with_h(0.1), default_initial_state(sys)));
    }
  }
  o.require(worst < 1e-6, "max_defect", worst);
  const double control = symplecticity_defect(builtin("harmonic"), explicit_euler_tableau(),
                                              with_h(0.1), default_initial_state("harmonic"));
  o.require(control > 1e-3, "explicit_euler", control);
  return o;
}

double harmonic_slope(const std::string& preset) {
  const PhasePoint x0 = default_initial_state("harmonic");
  return convergence_order(builtin("harmonic"), resolve_preset(preset).tableau, x0.q, x0.p, 1.0,
                           {0.2, 0.1, 0.05, 0.025})
      .slope;
}

Outcome criterion_4() {
  Outcome o;
  const struct {
    const char* preset;
    double order, tol;
  } table[] = {{"symplectic_euler", 1, 0.1}, {"midpoint", 2, 0.1}, {"stormer_verlet", 2, 0.1},
               {"trig3", 2, 0.2},            {"cheb2", 4, 0.2},    {"cheb3", 4, 0.3}};
  for (const auto& row : table) {
    const double s = harmonic_slope(row.preset);
    o.require(std::abs(s - row.order) <= row.tol, row.preset, s);
  }
  return o;
}

Outcome criterion_5() {
  Outcome o;
  bool refused = false;
  try {
    (void)legendre_to_lagrangian(builtin("bilinear"));
  } catch (const DegenerateSystemError&) {
    refused = true;
  }
  o.require(refused, "lagrangian_refused", refused ? 1.0 : 0.0);
  // Exact solution (q0 e^t, p0 e^-t), written out here.
  const HamiltonianSystem bil = builtin("bilinear");
  const ReferenceSolution exact = [](const Vector& q0, const Vector& p0, double t) {
    return PhasePoint{q0 * std::exp(t), p0 * std::exp(-t)};
  };
  const double s = convergence_order(bil, resolve_preset("midpoint").tableau, vec({1}), vec({1}),
                                     1.0, {0.2, 0.1, 0.05, 0.025}, exact)
                       .slope;
  o.require(std::abs(s - 2.0) <= 0.1, "slope", s);
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const HamiltonianSystem pend = builtin("pendulum");
  const ResolvedMethod m = resolve_preset("trig3");
  const Vector q0 = vec({1}), p0 = vec({0});
  const Trajectory a = integrate(SprkStepper(pend, m.tableau, with_h(0.05)), q0, p0, 100);
  const Trajectory b = integrate(GalerkinStepper(pend, m.basis, m.nodes, with_h(0.05)), q0, p0, 100);
  const Trajectory c = integrate(
      LagrangianGalerkinStepper(legendre_to_lagrangian(pend), m.basis, m.nodes, with_h(0.05)), q0, p0, 100);
  double ab = 0.0, bc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab = std::max(ab, distance(a.states[k], b.states[k]));
    bc = std::max(bc, distance(b.states[k], c.states[k]));
  }
  o.require(ab < 1e-9, "sprk_vs_direct", ab);
  o.require(bc < 1e-9, "lagrangian_vs_hamiltonian", bc);
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const Trajectory t = integrate(SprkStepper(builtin("kepler2d"), resolve_preset("cheb2").tableau, with_h(0.05)),
                                 vec({1, 0}), vec({0, 1.2}), 10000);
  double drift = 0.0;
  const double j0 = 1.0 * 1.2;  // q x p at the start
  for (const auto& x : t.states) drift = std::max(drift, std::abs(x.q(0) * x.p(1) - x.q(1) * x.p(0) - j0));
  o.require(drift < 1e-10, "drift", drift);
  return o;
}

Outcome criterion_8() {
  Outcome o;
  double identity = 0.0, forms = 0.0;
  for (const auto& preset : preset_names()) {
    const ResolvedMethod m = resolve_preset(preset);
    for (const std::string sys : {"harmonic", "pendulum", "kepler2d", "bilinear", "point_vortex_pair"}) {
      const PhasePoint x0 = default_initial_state(sys);
      for (double h : {0.1, 0.05}) {
        const auto d = verify_type2_identities(builtin(sys), m.basis, m.nodes, h, x0.q, x0.p);
        identity = std::max({identity, d.p0, d.q1});
        const auto e = evaluate_hd_plus(builtin(sys), m.basis, m.nodes, h, x0.q, d.step.p);
        forms = std::max(forms, std::abs(e.value - e.value_direct) / std::max(1.0, std::abs(e.value)));
      }
    }
  }
  o.require(identity < 1e-5, "identity_defect", identity);
  o.require(forms < 1e-11, "closed_vs_direct", forms);
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const ResolvedMethod m = resolve_preset("midpoint");
  double grad = 0.0, residual = 0.0;
  for (const std::string sys : {"harmonic", "bilinear"}) {
    const PhasePoint x0 = default_initial_state(sys);
    for (int k = 0; k <= 10; ++k) {
      const auto c = discrete_hj_check(builtin(sys), m.basis, m.nodes, 0.1, x0.q, x0.p, k);
      grad = std::max(grad, c.gradient_defect);
      residual = std::max(residual, c.hj_residual);
    }
  }
  o.require(grad < 1e-6, "gradient_defect", grad);
  o.require(residual < 1e-5, "hj_residual", residual);
  return o;
}

Outcome criterion_10() {
  Outcome o;
  const HamiltonianSystem pend = builtin("pendulum");
  const Trajectory t = integrate(SprkStepper(pend, resolve_preset("midpoint").tableau, with_h(0.1)),
                                 vec({1}), vec({0}), 100000);
  std::vector<double> e;
  e.reserve(t.size());
  const double h0 = 0.0 * 0.0 / 2 - std::cos(1.0);
  for (const auto& x : t.states) e.push_back(x.p(0) * x.p(0) / 2 - std::cos(x.q(0)) - h0);
  const std::size_t window = e.size() / 20;
  double head = 0.0, tail = 0.0, worst = 0.0;
  for (double v : e) worst = std::max(worst, std::abs(v));
  for (std::size_t i = 0; i < window; ++i) {
    head += std::abs(e[i]);
    tail += std::abs(e[e.size() - 1 - i]);
  }
  const double drift = std::abs(tail - head) / static_cast<double>(window);
  o.require(worst < 1e-3, "pendulum_max_dH", worst);
  o.require(drift < 1e-4, "pendulum_window_drift", drift);

  const Trajectory g = integrate(SprkStepper(builtin("harmonic"), resolve_preset("cheb2").tableau, with_h(0.1)),
                                 vec({1}), vec({0}), 10000);
  double quad = 0.0;
  for (const auto& x : g.states) quad = std::max(quad, std::abs(0.5 * (x.q(0) * x.q(0) + x.p(0) * x.p(0)) - 0.5));
  o.require(quad < 1e-10, "harmonic_cheb2_dH", quad);
  return o;
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* title;
    double limit_s;
    std::function<Outcome()> run;
  } criteria[] = {
      {1, "tableau golden values", 1.0, criterion_1},
      {2, "consistency and compatibility", 0.0, criterion_2},
      {3, "symplecticity", 10.0, criterion_3},
      {4, "convergence orders", 30.0, criterion_4},
      {5, "degenerate Hamiltonian", 0.0, criterion_5},
      {6, "stepper equivalence", 0.0, criterion_6},
      {7, "Kepler angular momentum", 30.0, criterion_7},
      {8, "generating-function identities", 0.0, criterion_8},
      {9, "discrete Hamilton-Jacobi", 0.0, criterion_9},
      {10, "energy behaviour", 60.0, criterion_10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0) o.require(secs < c.limit_s, "runtime_s", secs);
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
