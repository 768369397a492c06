#pragma once

#include <string>

#include "gsprk/basis.hpp"
#include "gsprk/types.hpp"

namespace gsprk {

/// Coefficients of an s-stage partitioned Runge-Kutta pair. `a` drives the
/// q-stages, `a_tilde` the p-stages; both share weights `b`.
struct SprkTableau {
  struct Provenance {
    std::string basis;  // e.g. "trig(s=3)", empty for hand-written tableaux
    std::string nodes;
    std::string name;   // preset name when built from one
  };

  int s = 0;
  Vector c;
  Vector b;
  Matrix a;
  Matrix a_tilde;
  /// Row sums of a_tilde. For display only, never used by the steppers.
  Vector c_tilde;
  Provenance provenance;

  /// Assembles a tableau from explicit coefficients without checking
  /// symplecticity. c_tilde is filled from a_tilde.
  static SprkTableau from_coefficients(Vector c, Vector b, Matrix a, Matrix a_tilde,
                                       std::string name = {});
};

/// Weights below this magnitude are treated as zero.
inline constexpr double kZeroWeightThreshold = 1e-13;

/// Galerkin construction: b = M^{-1} B, a = A_psi M^{-T},
/// a_tilde(i,j) = (b_i b_j - b_j a(j,i)) / b_i.
/// Throws InvalidSpecError for a singular M or a vanishing weight.
SprkTableau build_tableau(const BasisSet& basis, const NodeSet& nodes);

/// dual coefficients a_tilde(i,j) = (b_i b_j - b_j a(j,i)) / b_i.
Matrix symplectic_dual(const Vector& b, const Matrix& a);

struct ValidationReport {
  double consistency_defect = 0.0;    // |sum b_i - 1|
  double compatibility_defect = 0.0;  // max |b_i at_ij + b_j a_ji - b_i b_j|
  double row_sum_defect = 0.0;        // max |sum_j a_ij - c_i|
  double min_abs_weight = 0.0;
  bool admissible = false;

  [[nodiscard]] std::string to_string() const;
};

/// Thresholds behind ValidationReport::admissible.
inline constexpr double kConsistencyTolerance = 1e-12;
inline constexpr double kCompatibilityTolerance = 1e-12;

ValidationReport validate_tableau(const SprkTableau& tableau);

/// Butcher-style text blocks for (c | a | b) and (c_tilde | a_tilde | b).
std::string render_text(const SprkTableau& tableau);
/// CSV with header `i,j,c_i,b_i,a_ij,atilde_ij`, 1-based indices, one row per
/// (i,j) pair.
std::string render_csv(const SprkTableau& tableau);

}  // namespace gsprk
