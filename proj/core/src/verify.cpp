#include "gsprk/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "gsprk/diagnostics.hpp"
#include "gsprk/errors.hpp"
#include "gsprk/format.hpp"
#include "gsprk/generating_function.hpp"
#include "gsprk/methods.hpp"

namespace gsprk {
namespace {

constexpr double kPi = std::numbers::pi;

struct Golden {
  std::string label;
  std::string preset;
  Vector c;
  Vector b;
  Matrix a;
  Matrix a_tilde;
  double tolerance;
};

Matrix mat(int s, std::initializer_list<double> entries) {
  Matrix m(s, s);
  auto it = entries.begin();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) m(i, j) = *it++;
  return m;
}

Vector vec(std::initializer_list<double> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (double x : entries) v(i++) = x;
  return v;
}

std::vector<Golden> golden_tableaux() {
  const double r3 = std::sqrt(3.0), r2 = std::sqrt(2.0);
  const double w = (kPi - 2.0) / (2.0 * kPi);
  std::vector<Golden> g;
  g.push_back({"symplectic_euler", "symplectic_euler", vec({0}), vec({1}), mat(1, {0}),
               mat(1, {1}), 1e-14});
  g.push_back({"midpoint", "midpoint", vec({0.5}), vec({1}), mat(1, {0.5}), mat(1, {0.5}), 1e-14});
  g.push_back({"adjoint_euler", "adjoint_euler", vec({1}), vec({1}), mat(1, {1}), mat(1, {0}),
               1e-14});
  g.push_back({"stormer_verlet", "stormer_verlet", vec({0, 1}), vec({0.5, 0.5}),
               mat(2, {0, 0, 0.5, 0.5}), mat(2, {0.5, 0, 0.5, 0}), 1e-14});
  g.push_back({"trig3", "trig3", vec({0, 0.5, 1}), vec({w, 2.0 / kPi, w}),
               mat(3, {0, 0, 0,                                       //
                       0.25, 1.0 / kPi, (kPi - 4.0) / (4.0 * kPi),    //
                       w, 2.0 / kPi, w}),
               mat(3, {w, (kPi - 4.0) / (kPi * kPi - 2.0 * kPi), 0,  //
                       w, 1.0 / kPi, 0,                              //
                       w, 1.0 / (kPi - 2.0), 0}),
               1e-12});
  g.push_back({"cheb1", "cheb1", vec({0.5}), vec({1}), mat(1, {0.5}), mat(1, {0.5}), 1e-12});
  const Matrix gauss2 = mat(2, {0.25, 0.25 - r3 / 6.0, 0.25 + r3 / 6.0, 0.25});
  g.push_back({"cheb2", "cheb2", vec({0.5 - r3 / 6.0, 0.5 + r3 / 6.0}), vec({0.5, 0.5}), gauss2,
               gauss2, 1e-12});
  g.push_back({"cheb3", "cheb3", vec({0.5 - r2 / 4.0, 0.5, 0.5 + r2 / 4.0}),
               vec({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}),
               mat(3, {1.0 / 6.0 + r2 / 48.0, 1.0 / 6.0 - r2 / 6.0, 1.0 / 6.0 - 5.0 * r2 / 48.0,
                       1.0 / 6.0 + r2 / 8.0, 1.0 / 6.0, 1.0 / 6.0 - r2 / 8.0,
                       1.0 / 6.0 + 5.0 * r2 / 48.0, 1.0 / 6.0 + r2 / 6.0,
                       1.0 / 6.0 - r2 / 48.0}),
               mat(3, {1.0 / 6.0 - r2 / 48.0, 1.0 / 6.0 - r2 / 8.0, 1.0 / 6.0 - 5.0 * r2 / 48.0,
                       1.0 / 6.0 + r2 / 6.0, 1.0 / 6.0, 1.0 / 6.0 - r2 / 6.0,
                       1.0 / 6.0 + 5.0 * r2 / 48.0, 1.0 / 6.0 + r2 / 8.0,
                       1.0 / 6.0 + r2 / 48.0}),
               1e-12});
  return g;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double state_distance(const PhasePoint& x, const PhasePoint& y) {
  return std::max(max_abs(x.q - y.q), max_abs(x.p - y.p));
}

class Collector {
 public:
  explicit Collector(std::vector<CheckResult>& out) : out_(out) {}

  // Records measured < threshold; exceptions become failed checks.
  void below(const std::string& suite, const std::string& name, double threshold,
             const std::function<double()>& measure) {
    record(suite, name, threshold, measure, false);
  }
  void above(const std::string& suite, const std::string& name, double threshold,
             const std::function<double()>& measure) {
    record(suite, name, threshold, measure, true);
  }

 private:
  void record(const std::string& suite, const std::string& name, double threshold,
              const std::function<double()>& measure, bool exceed) {
    CheckResult r{suite, name, 0.0, threshold, false, {}};
    try {
      r.measured = measure();
      r.passed = std::isfinite(r.measured) &&
                 (exceed ? r.measured > threshold : r.measured < threshold);
    } catch (const std::exception& e) {
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.detail = e.what();
    }
    out_.push_back(std::move(r));
  }

  std::vector<CheckResult>& out_;
};

const std::vector<std::string> kStructuralSystems = {"harmonic", "pendulum", "kepler2d",
                                                     "bilinear"};

void tableaux_suite(Collector& c) {
  for (const auto& g : golden_tableaux()) {
    c.below("tableaux", "golden/" + g.label, g.tolerance, [&] {
      const SprkTableau t = resolve_preset(g.preset).tableau;
      return std::max({max_abs(t.c - g.c), max_abs(t.b - g.b), max_abs(t.a - g.a),
                       max_abs(t.a_tilde - g.a_tilde)});
    });
  }
  for (const auto& name : preset_names()) {
    c.below("tableaux", "consistency/" + name, 1e-13,
            [&] { return validate_tableau(resolve_preset(name).tableau).consistency_defect; });
    c.below("tableaux", "compatibility/" + name, 1e-13,
            [&] { return validate_tableau(resolve_preset(name).tableau).compatibility_defect; });
  }
  c.below("tableaux", "closed_form_integrals/trig3", 1e-12, [] {
    const BasisSet basis = BasisSet::trigonometric(3);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (double u : {0.0, 0.5, 1.0})
        worst = std::max(worst, std::abs(basis.integral(i, u) - basis.numeric_integral(i, u)));
    return worst;
  });
}

void symplecticity_suite(Collector& c) {
  StepperConfig cfg;
  cfg.h = 0.1;
  for (const auto& preset : preset_names()) {
    for (const auto& sys : kStructuralSystems) {
      c.below("symplecticity", preset + "/" + sys, 1e-6, [&] {
        return symplecticity_defect(builtin(sys), resolve_preset(preset).tableau, cfg,
                                    default_initial_state(sys));
      });
    }
  }
  c.above("symplecticity", "explicit_euler_control/harmonic", 1e-3, [&] {
    return symplecticity_defect(builtin("harmonic"), explicit_euler_tableau(), cfg,
                                default_initial_state("harmonic"));
  });
}

void equivalence_suite(Collector& c) {
  StepperConfig cfg;
  cfg.h = 0.05;
  const int steps = 100;
  const HamiltonianSystem pendulum = builtin("pendulum");
  const PhasePoint x0 = default_initial_state("pendulum");
  for (const std::string preset : {"trig3", "cheb2", "stormer_verlet"}) {
    c.below("equivalence", "sprk_vs_direct/" + preset, 1e-9, [&] {
      const ResolvedMethod m = resolve_preset(preset);
      const Trajectory a = integrate(SprkStepper(pendulum, m.tableau, cfg), x0.q, x0.p, steps);
      const Trajectory b =
          integrate(GalerkinStepper(pendulum, m.basis, m.nodes, cfg), x0.q, x0.p, steps);
      double worst = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, state_distance(a.states[k], b.states[k]));
      return worst;
    });
    c.below("equivalence", "lagrangian_vs_hamiltonian/" + preset, 1e-9, [&] {
      const ResolvedMethod m = resolve_preset(preset);
      const Trajectory a =
          integrate(GalerkinStepper(pendulum, m.basis, m.nodes, cfg), x0.q, x0.p, steps);
      const Trajectory b = integrate(
          LagrangianGalerkinStepper(legendre_to_lagrangian(pendulum), m.basis, m.nodes, cfg),
          x0.q, x0.p, steps);
      double worst = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, state_distance(a.states[k], b.states[k]));
      return worst;
    });
  }
  c.above("equivalence", "bilinear_has_no_lagrangian", 0.5, [] {
    try {
      (void)legendre_to_lagrangian(builtin("bilinear"));
    } catch (const DegenerateSystemError&) {
      return 1.0;
    }
    return 0.0;
  });
}

void noether_suite(Collector& c) {
  c.below("noether", "kepler2d/cheb2", 1e-10, [] {
    StepperConfig cfg;
    cfg.h = 0.05;
    const HamiltonianSystem kepler = builtin("kepler2d");
    const PhasePoint x0 = default_initial_state("kepler2d");
    const Trajectory t =
        integrate(SprkStepper(kepler, resolve_preset("cheb2").tableau, cfg), x0.q, x0.p, 10000);
    return momentum_drift(t, *kepler.symmetry);
  });
}

void generating_suite(Collector& c) {
  const double h = 0.1;
  for (const auto& preset : preset_names()) {
    for (const auto& sys : builtin_names()) {
      const std::string label = preset + "/" + sys;
      c.below("generating", "type2_identities/" + label, 1e-5, [&] {
        const ResolvedMethod m = resolve_preset(preset);
        const PhasePoint x0 = default_initial_state(sys);
        const auto d = verify_type2_identities(builtin(sys), m.basis, m.nodes, h, x0.q, x0.p);
        return std::max(d.p0, d.q1);
      });
      c.below("generating", "closed_vs_direct/" + label, 1e-11, [&] {
        const ResolvedMethod m = resolve_preset(preset);
        const HamiltonianSystem system = builtin(sys);
        const PhasePoint x0 = default_initial_state(sys);
        const StepResult step = direct_galerkin_step(system, m.basis, m.nodes, StepperConfig{},
                                                     x0.q, x0.p);
        const auto e = evaluate_hd_plus(system, m.basis, m.nodes, h, x0.q, step.state.p);
        return std::abs(e.value - e.value_direct) / std::max(1.0, std::abs(e.value));
      });
    }
  }
}

void hj_suite(Collector& c) {
  const ResolvedMethod m = resolve_preset("midpoint");
  for (const std::string sys : {"harmonic", "bilinear"}) {
    const HamiltonianSystem system = builtin(sys);
    const PhasePoint x0 = default_initial_state(sys);
    for (int k = 0; k <= 10; ++k) {
      const std::string label = sys + "/k=" + std::to_string(k);
      HamiltonJacobiCheck check;
      bool ok = false;
      std::string error;
      try {
        check = discrete_hj_check(system, m.basis, m.nodes, 0.1, x0.q, x0.p, k);
        ok = true;
      } catch (const std::exception& e) {
        error = e.what();
      }
      auto value = [&](double HamiltonJacobiCheck::*field) {
        return [&, field]() -> double {
          if (!ok) throw NumericalError(error);
          return check.*field;
        };
      };
      c.below("hj", "gradient/" + label, 1e-6, value(&HamiltonJacobiCheck::gradient_defect));
      c.below("hj", "residual/" + label, 1e-5, value(&HamiltonJacobiCheck::hj_residual));
    }
  }
}

}  // namespace

std::vector<std::string> verify_scopes() {
  return {"tableaux", "symplecticity", "equivalence", "noether", "generating", "hj", "all"};
}

std::vector<CheckResult> run_verification(const std::string& scope) {
  const std::vector<std::pair<std::string, void (*)(Collector&)>> suites = {
      {"tableaux", tableaux_suite},       {"symplecticity", symplecticity_suite},
      {"equivalence", equivalence_suite}, {"noether", noether_suite},
      {"generating", generating_suite},   {"hj", hj_suite},
  };
  std::vector<CheckResult> out;
  Collector c(out);
  bool matched = false;
  for (const auto& [name, run] : suites) {
    if (scope == "all" || scope == name) {
      run(c);
      matched = true;
    }
  }
  if (!matched) {
    throw InvalidSpecError("unknown verify scope '" + scope +
                           "' (expected tableaux, symplecticity, equivalence, noether, "
                           "generating, hj or all)");
  }
  return out;
}

std::string render_checks(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : checks) {
    os << (r.passed ? "PASS " : "FAIL ") << r.suite << '/' << r.name
       << " measured=" << format_real(r.measured) << " threshold=" << format_real(r.threshold);
    if (!r.detail.empty()) os << " error=\"" << r.detail << '"';
    os << '\n';
    if (!r.passed) ++failed;
  }
  os << checks.size() - failed << '/' << checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace gsprk
