#include <cmath>

#include <gtest/gtest.h>

#include "gsprk/diagnostics.hpp"
#include "gsprk/errors.hpp"
#include "gsprk/methods.hpp"

using namespace gsprk;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }

StepperConfig with_h(double h) {
  StepperConfig cfg;
  cfg.h = h;
  return cfg;
}

const std::vector<double> kHs = {0.2, 0.1, 0.05, 0.025};

double slope(const std::string& system, const std::string& preset) {
  const PhasePoint x0 = default_initial_state(system);
  return convergence_order(builtin(system), resolve_preset(preset).tableau, x0.q, x0.p, 1.0, kHs)
      .slope;
}

}  // namespace

TEST(CanonicalMatrix, Layout) {
  const Matrix w = canonical_symplectic_matrix(2);
  EXPECT_EQ(w(0, 2), 1.0);
  EXPECT_EQ(w(2, 0), -1.0);
  EXPECT_EQ(w(0, 0), 0.0);
  EXPECT_LT((w * w + Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Symplecticity, MidpointOscillatorToRounding) {
  const double d = symplecticity_defect(builtin("harmonic"), resolve_preset("midpoint").tableau,
                                        with_h(0.1), PhasePoint{v1(1), v1(0)});
  EXPECT_LT(d, 1e-9);
}

TEST(Symplecticity, PendulumTrigThree) {
  const double d = symplecticity_defect(builtin("pendulum"), resolve_preset("trig3").tableau,
                                        with_h(0.1), PhasePoint{v1(1), v1(0)});
  EXPECT_LT(d, 1e-6);
}

TEST(Symplecticity, ExplicitEulerDetected) {
  const double d = symplecticity_defect(builtin("harmonic"), explicit_euler_tableau(), with_h(0.1),
                                        PhasePoint{v1(1), v1(0)});
  // J = [[1, h], [-h, 1]] gives J^T Omega J = (1 + h^2) Omega.
  EXPECT_NEAR(d, 0.01, 1e-8);
}

TEST(Symplecticity, AllPresetsAllBuiltins) {
  for (const auto& preset : preset_names()) {
    for (const auto& name : builtin_names()) {
      const double d = symplecticity_defect(builtin(name), resolve_preset(preset).tableau,
                                            with_h(0.1), default_initial_state(name));
      EXPECT_LT(d, 1e-6) << preset << " " << name;
    }
  }
}

TEST(Symplecticity, GalerkinStepperIsSymplecticToo) {
  const ResolvedMethod m = resolve_preset("cheb3");
  const GalerkinStepper stepper(builtin("kepler2d"), m.basis, m.nodes, with_h(0.1));
  EXPECT_LT(symplecticity_defect(stepper, default_initial_state("kepler2d")), 1e-6);
}

TEST(Momentum, KeplerGaussAndEuler) {
  const HamiltonianSystem kep = builtin("kepler2d");
  const PhasePoint x0 = default_initial_state("kepler2d");
  for (const std::string preset : {"cheb2", "symplectic_euler"}) {
    const Trajectory t =
        integrate(SprkStepper(kep, resolve_preset(preset).tableau, with_h(0.05)), x0.q, x0.p, 10000);
    EXPECT_LT(momentum_drift(t, planar_rotation()), 1e-10) << preset;
  }
}

TEST(Momentum, SingleStateHasNoDrift) {
  Trajectory t;
  t.states.push_back(default_initial_state("kepler2d"));
  t.times.push_back(0.0);
  EXPECT_EQ(momentum_drift(t, planar_rotation()), 0.0);
}

TEST(Momentum, DimensionMismatchRejected) {
  const Trajectory t = integrate(
      SprkStepper(builtin("harmonic"), resolve_preset("midpoint").tableau, with_h(0.1)), v1(1),
      v1(0), 2);
  EXPECT_THROW(momentum_drift(t, planar_rotation()), InvalidSpecError);
}

TEST(Energy, SeriesStartsAtZero) {
  const Trajectory t = integrate(
      SprkStepper(builtin("pendulum"), resolve_preset("midpoint").tableau, with_h(0.1)), v1(1),
      v1(0), 20);
  const auto e = energy_series(builtin("pendulum"), t);
  ASSERT_EQ(e.size(), t.size());
  EXPECT_EQ(e.front(), 0.0);
}

TEST(Energy, DriftSummaryWindows) {
  std::vector<double> e(100, 0.0);
  for (std::size_t i = 95; i < 100; ++i) e[i] = 2.0;
  e[0] = -1.0;
  const EnergyDriftSummary s = energy_drift(e);
  EXPECT_DOUBLE_EQ(s.max_abs_error, 2.0);
  EXPECT_DOUBLE_EQ(s.head_mean, 0.2);
  EXPECT_DOUBLE_EQ(s.tail_mean, 2.0);
  EXPECT_DOUBLE_EQ(s.window_difference(), 1.8);
}

TEST(Energy, QuadraticInvariantUnderGauss) {
  const Trajectory t = integrate(
      SprkStepper(builtin("harmonic"), resolve_preset("cheb2").tableau, with_h(0.1)), v1(1),
      v1(0), 10000);
  EXPECT_LT(energy_drift(energy_series(builtin("harmonic"), t)).max_abs_error, 1e-10);
}

TEST(Convergence, OrderTable) {
  EXPECT_NEAR(slope("harmonic", "symplectic_euler"), 1.0, 0.1);
  EXPECT_NEAR(slope("harmonic", "midpoint"), 2.0, 0.1);
  EXPECT_NEAR(slope("harmonic", "stormer_verlet"), 2.0, 0.1);
  EXPECT_NEAR(slope("harmonic", "trig3"), 2.0, 0.2);
  EXPECT_NEAR(slope("harmonic", "cheb2"), 4.0, 0.2);
  EXPECT_NEAR(slope("harmonic", "cheb3"), 4.0, 0.3);
  EXPECT_NEAR(slope("bilinear", "midpoint"), 2.0, 0.1);
}

TEST(Convergence, PendulumAgainstGaussReference) {
  const PhasePoint x0 = default_initial_state("pendulum");
  const HamiltonianSystem pend = builtin("pendulum");
  const auto ref = gauss_reference(pend, 0.025 / 100);
  const auto study =
      convergence_order(pend, resolve_preset("midpoint").tableau, x0.q, x0.p, 1.0, kHs, ref);
  EXPECT_NEAR(study.slope, 2.0, 0.1);
}

TEST(Convergence, GaussReferenceMatchesExactFlow) {
  const HamiltonianSystem h = builtin("harmonic");
  const auto ref = gauss_reference(h, 0.005);
  const PhasePoint a = ref(v1(1), v1(0), 1.0);
  const PhasePoint b = (*h.exact_flow)(v1(1), v1(0), 1.0);
  EXPECT_LT((a.q - b.q).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Convergence, Preconditions) {
  const HamiltonianSystem h = builtin("harmonic");
  const SprkTableau t = resolve_preset("midpoint").tableau;
  EXPECT_THROW(convergence_order(h, t, v1(1), v1(0), 1.0, {0.1, 0.05}), InvalidSpecError);
  EXPECT_THROW(convergence_order(h, t, v1(1), v1(0), 1.0, {0.3, 0.1, 0.05}), InvalidSpecError);
  EXPECT_THROW(convergence_order(builtin("pendulum"), t, v1(1), v1(0), 1.0, kHs),
               InvalidSpecError);
}

TEST(Convergence, RoundingFloorExcluded) {
  // The reference is the method itself, so every error is zero.
  const HamiltonianSystem h = builtin("bilinear");
  const ReferenceSolution self = [&](const Vector& q0, const Vector& p0, double t) {
    return integrate(SprkStepper(h, resolve_preset("midpoint").tableau, with_h(t / 10)), q0, p0, 10)
        .back();
  };
  const auto study = [&] {
    return convergence_order(h, resolve_preset("midpoint").tableau, v1(1), v1(1), 1.0,
                             {0.1, 0.1, 0.1}, self);
  };
  EXPECT_THROW(study(), NumericalError);
}

TEST(LeastSquares, ExactLine) {
  EXPECT_NEAR(least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-15);
}

TEST(ReportCsv, Layout) {
  const Trajectory t = integrate(
      SprkStepper(builtin("kepler2d"), resolve_preset("cheb2").tableau, with_h(0.1)),
      default_initial_state("kepler2d").q, default_initial_state("kepler2d").p, 3);
  DiagnosticsReport r;
  r.energy_series = energy_series(builtin("kepler2d"), t);
  r.momentum_series = momentum_series(t, planar_rotation());
  r.symplecticity_defect = 1e-9;
  const std::string csv = render_report_csv(t, r);
  EXPECT_EQ(csv.rfind("k,t,energy_error,momentum_error\n", 0), 0u);
  EXPECT_NE(csv.find("\n3,0.30000000000000004,"), std::string::npos);
  EXPECT_NE(csv.find("# max_abs_momentum_error,"), std::string::npos);
  EXPECT_NE(csv.find("# symplecticity_defect,1.0000000000000001e-09"), std::string::npos);
}
