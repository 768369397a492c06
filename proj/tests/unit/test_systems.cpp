#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gsprk/errors.hpp"
#include "gsprk/systems.hpp"

using namespace gsprk;

namespace {

Vector v1(double x) { return Vector::Constant(1, x); }
Vector v2(double x, double y) { return (Vector(2) << x, y).finished(); }

std::vector<PhasePoint> random_points(int n, int count, double lo, double hi, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<PhasePoint> out;
  for (int k = 0; k < count; ++k) {
    Vector q(n), p(n);
    for (int i = 0; i < n; ++i) {
      q(i) = u(rng);
      p(i) = u(rng);
    }
    out.push_back({q, p});
  }
  return out;
}

}  // namespace

TEST(Builtin, UnknownNameRejected) { EXPECT_THROW(builtin("duffing"), InvalidSpecError); }

TEST(Builtin, BilinearValues) {
  const HamiltonianSystem h = builtin("bilinear");
  EXPECT_DOUBLE_EQ(h.value(v1(2), v1(3)), 6.0);
  EXPECT_DOUBLE_EQ(h.grad_q(v1(2), v1(3))(0), 3.0);
  EXPECT_DOUBLE_EQ(h.grad_p(v1(2), v1(3))(0), 2.0);
  EXPECT_FALSE(h.hyperregular);
  const PhasePoint x = (*h.exact_flow)(v1(1), v1(1), 1.0);
  EXPECT_NEAR(x.q(0), 2.718281828459045, 1e-15);
  EXPECT_NEAR(x.p(0), 0.36787944117144233, 1e-15);
}

TEST(Builtin, HarmonicQuarterTurn) {
  const HamiltonianSystem h = builtin("harmonic");
  const PhasePoint x = (*h.exact_flow)(v1(1), v1(0), std::numbers::pi / 2);
  EXPECT_NEAR(x.q(0), 0.0, 1e-15);
  EXPECT_NEAR(x.p(0), -1.0, 1e-15);
  EXPECT_TRUE(h.hyperregular);
}

TEST(Builtin, PendulumAndKeplerValues) {
  const HamiltonianSystem pend = builtin("pendulum");
  EXPECT_NEAR(pend.value(v1(0.3), v1(0.5)), 0.125 - std::cos(0.3), 1e-15);
  EXPECT_FALSE(pend.exact_flow.has_value());
  const HamiltonianSystem kep = builtin("kepler2d");
  EXPECT_NEAR(kep.value(v2(3, 4), v2(1, 1)), 1.0 - 0.2, 1e-15);
  ASSERT_TRUE(kep.symmetry.has_value());
  EXPECT_NEAR(kep.symmetry->momentum(v2(1, 0), v2(0, 1.2)), 1.2, 1e-15);
}

TEST(Builtin, PointVortexPair) {
  const HamiltonianSystem h = builtin("point_vortex_pair");
  EXPECT_EQ(h.n, 2);
  EXPECT_FALSE(h.hyperregular);
  // Separation (1, 0): H = -ln(1)/(4 pi) = 0.
  EXPECT_NEAR(h.value(v2(0.5, -0.5), v2(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(h.value(v2(1, 0), v2(0, 1)), -std::log(2.0) / (4 * std::numbers::pi), 1e-15);
}

TEST(CheckGradients, AllBuiltinsAgreeWithDifferences) {
  for (const auto& name : builtin_names()) {
    const HamiltonianSystem h = builtin(name);
    std::vector<PhasePoint> pts = random_points(h.n, 10, -2.0, 2.0, 3);
    if (name == "kepler2d" || name == "point_vortex_pair") {
      for (auto& x : pts) x.q(0) += 5.0;  // keep away from the singularity
    }
    EXPECT_LT(check_gradients(h, pts), 1e-7) << name;
  }
  EXPECT_LT(check_gradients(builtin("harmonic"), random_points(1, 10, -2, 2, 5)), 1e-8);
  EXPECT_LT(check_gradients(builtin("bilinear"), random_points(1, 10, -2, 2, 5)), 1e-9);
}

TEST(CheckGradients, WrongGradientDetected) {
  HamiltonianSystem h = builtin("harmonic");
  h.grad_q = [](const Vector& q, const Vector&) { return Vector(2.0 * q); };
  const std::vector<PhasePoint> pts = {{v1(1.5), v1(0.0)}};
  EXPECT_NEAR(check_gradients(h, pts), 1.5, 1e-8);
}

TEST(ExactFlow, GroupPropertyAndEnergy) {
  for (const auto& name : builtin_names()) {
    const HamiltonianSystem h = builtin(name);
    if (!h.exact_flow) continue;
    const PhasePoint x0 = default_initial_state(name);
    const auto& flow = *h.exact_flow;
    const PhasePoint a = flow(x0.q, x0.p, 0.7);
    const PhasePoint ab = flow(a.q, a.p, 1.1);
    const PhasePoint direct = flow(x0.q, x0.p, 1.8);
    EXPECT_LT((ab.q - direct.q).cwiseAbs().maxCoeff(), 1e-12) << name;
    EXPECT_LT((ab.p - direct.p).cwiseAbs().maxCoeff(), 1e-12) << name;
    EXPECT_NEAR(h.energy(direct), h.energy(x0), 1e-12) << name;
  }
}

TEST(ExactFlow, PointVortexSolvesHamiltonsEquations) {
  const HamiltonianSystem h = builtin("point_vortex_pair");
  const Vector q0 = v2(0.3, -0.4), p0 = v2(0.1, 0.5);
  const double t = 0.4, eps = 1e-5;
  const PhasePoint plus = (*h.exact_flow)(q0, p0, t + eps);
  const PhasePoint minus = (*h.exact_flow)(q0, p0, t - eps);
  const PhasePoint x = (*h.exact_flow)(q0, p0, t);
  const Vector qdot = (plus.q - minus.q) / (2 * eps), pdot = (plus.p - minus.p) / (2 * eps);
  EXPECT_LT((qdot - h.grad_p(x.q, x.p)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((pdot + h.grad_q(x.q, x.p)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Kepler, RotationInvariance) {
  const HamiltonianSystem h = builtin("kepler2d");
  const Vector q = v2(0.7, -1.3), p = v2(0.4, 0.9);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    const double th = angle(rng);
    // exp(th G) for G = [[0,-1],[1,0]]
    const Matrix R = Matrix::Identity(2, 2) * std::cos(th) + h.symmetry->G * std::sin(th);
    EXPECT_NEAR(h.value(R * q, R * p), h.value(q, p), 1e-12);
  }
}

TEST(Legendre, HarmonicAndPendulum) {
  const LagrangianSystem lh = legendre_to_lagrangian(builtin("harmonic"));
  EXPECT_NEAR(lh.value(v1(0), v1(1)), 0.5, 1e-12);
  EXPECT_NEAR(lh.grad_v(v1(0), v1(1))(0), 1.0, 1e-12);
  const LagrangianSystem lp = legendre_to_lagrangian(builtin("pendulum"));
  EXPECT_NEAR(lp.value(v1(0), v1(0)), 1.0, 1e-12);
  EXPECT_NEAR(lp.grad_q(v1(0.4), v1(0.2))(0), -std::sin(0.4), 1e-12);
  EXPECT_LT(check_gradients(lp, random_points(1, 10, -1.5, 1.5, 9)), 1e-7);
}

TEST(Legendre, KeplerIsHyperregular) {
  const LagrangianSystem lk = legendre_to_lagrangian(builtin("kepler2d"));
  EXPECT_NEAR(lk.value(v2(2, 0), v2(0, 1)), 0.5 + 0.5, 1e-12);
}

TEST(Legendre, DegenerateSystemsHaveNoLagrangian) {
  for (const std::string name : {"bilinear", "point_vortex_pair"}) {
    try {
      legendre_to_lagrangian(builtin(name));
      FAIL() << name;
    } catch (const DegenerateSystemError& e) {
      EXPECT_NE(std::string(e.what()).find("no Lagrangian exists"), std::string::npos);
    }
  }
}

TEST(Legendre, FiberInversionRecoversMomentum) {
  const HamiltonianSystem h = builtin("kepler2d");
  const Vector q = v2(1.0, 0.5), p = v2(-0.3, 0.8);
  const Vector v = h.grad_p(q, p);
  EXPECT_LT((invert_fiber_derivative(h, q, v) - p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DefaultState, MatchesSystemDimension) {
  for (const auto& name : builtin_names()) {
    const PhasePoint x = default_initial_state(name);
    EXPECT_EQ(x.q.size(), builtin(name).n) << name;
    EXPECT_EQ(x.p.size(), builtin(name).n) << name;
  }
  EXPECT_THROW(default_initial_state("nope"), InvalidSpecError);
}
