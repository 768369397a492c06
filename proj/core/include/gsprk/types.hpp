#pragma once

#include <algorithm>

#include <Eigen/Dense>

namespace gsprk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point (q, p) of phase space T*Q with q, p of equal dimension n.
struct PhasePoint {
  Vector q;
  Vector p;

  [[nodiscard]] Eigen::Index dimension() const { return q.size(); }
};

/// Largest of 1, |q|_inf and |p|_inf; the scale used for relative tolerances.
inline double state_scale(const Vector& q, const Vector& p) {
  double s = 1.0;
  if (q.size() > 0) s = std::max(s, q.cwiseAbs().maxCoeff());
  if (p.size() > 0) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

}  // namespace gsprk
