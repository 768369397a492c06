#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gsprk/types.hpp"

namespace gsprk {

enum class BasisKind { Monomial, LagrangeAtNodes, Trigonometric, Custom };

std::string to_string(BasisKind kind);

/// Ordered quadrature/collocation points in [0,1], strictly increasing.
class NodeSet {
 public:
  /// Throws InvalidSpecError on an empty list, entries outside [0,1],
  /// duplicates ("duplicate nodes") or a decreasing pair.
  explicit NodeSet(std::vector<double> c);

  [[nodiscard]] int size() const { return static_cast<int>(c_.size()); }
  [[nodiscard]] double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const std::vector<double>& values() const { return c_; }
  [[nodiscard]] Vector as_vector() const;

 private:
  std::vector<double> c_;
};

/// Roots of the Chebyshev-quadrature polynomials G_1..G_3 on [-1,1], mapped
/// to [0,1] by c = (x+1)/2. Only 1 <= s <= 3 is supported.
NodeSet chebyshev_nodes(int s);

/// s scalar functions psi_1..psi_s on [0,1] spanning the velocity space used
/// by the Galerkin construction. Immutable once built.
class BasisSet {
 public:
  using Function = std::function<double(double)>;

  /// {1, tau, ..., tau^(s-1)}.
  static BasisSet monomial(int s);
  /// Lagrange interpolants l_i with l_i(x_j) = delta_ij.
  static BasisSet lagrange(const NodeSet& interpolation_nodes);
  /// {1, cos(pi tau), sin(pi tau), cos(2 pi tau), sin(2 pi tau), ...}
  /// truncated to s entries.
  static BasisSet trigonometric(int s);
  /// Arbitrary callables; integrals fall back to Gauss-Legendre quadrature.
  static BasisSet custom(std::vector<Function> functions, bool contains_constant,
                         std::string label = "custom");

  [[nodiscard]] int size() const { return s_; }
  [[nodiscard]] BasisKind kind() const { return kind_; }
  [[nodiscard]] bool contains_constant() const { return contains_constant_; }
  /// Interpolation nodes of a LagrangeAtNodes basis, empty otherwise.
  [[nodiscard]] const std::vector<double>& lagrange_nodes() const { return lagrange_nodes_; }

  /// psi_i(tau), zero-based i.
  [[nodiscard]] double value(int i, double tau) const;
  /// Integral of psi_i over [0, upper]; closed form except for Custom.
  [[nodiscard]] double integral(int i, double upper) const;
  /// Same integral evaluated with the Gauss-Legendre fallback, whatever the
  /// kind. Used to cross-check the closed forms.
  [[nodiscard]] double numeric_integral(int i, double upper) const;

  [[nodiscard]] std::string describe() const;

 private:
  BasisSet() = default;

  BasisKind kind_ = BasisKind::Monomial;
  int s_ = 0;
  bool contains_constant_ = false;
  std::string label_;
  std::vector<double> lagrange_nodes_;
  // Monomial coefficients of each Lagrange interpolant, lowest degree first.
  std::vector<std::vector<double>> lagrange_coefficients_;
  std::vector<Function> custom_;
};

/// Builds a basis of the given kind. `lagrange_nodes` is required (and must
/// have s entries) for LagrangeAtNodes and ignored otherwise. Custom bases go
/// through BasisSet::custom.
BasisSet make_basis(BasisKind kind, int s, std::span<const double> lagrange_nodes = {});

/// Integral of f over [0, upper] with a 64-point Gauss-Legendre rule; throws
/// NumericalError when the 32-point rule disagrees beyond 1e-10 relative to
/// the L1 mass, which signals a non-smooth or non-integrable integrand.
double gauss_legendre_integral(const BasisSet::Function& f, double upper);

/// The moment data of a basis against a node set:
///   B_i = int_0^1 psi_i,  A_psi(i,j) = int_0^{c_i} psi_j,  M(i,j) = psi_i(c_j).
struct BasisIntegrals {
  Vector B;
  Matrix A_psi;
  Matrix M;
};

BasisIntegrals compute_integrals(const BasisSet& basis, const NodeSet& nodes);

/// 2-norm condition number sigma_max / sigma_min (infinity when singular).
double condition_number(const Matrix& m);

inline constexpr double kMaxConditionNumber = 1e12;

/// Weights b = M^{-1} B of the interpolatory rule that is exact on the span of
/// the basis. Throws InvalidSpecError when cond(M) > kMaxConditionNumber.
Vector induced_quadrature(const BasisIntegrals& integrals);

/// sin(pi x) and cos(pi x) with exact values at half-integers.
double sin_pi(double x);
double cos_pi(double x);

}  // namespace gsprk
