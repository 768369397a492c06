#include "gsprk/tableau.hpp"

#include <cmath>
#include <sstream>

#include "gsprk/errors.hpp"
#include "gsprk/format.hpp"

namespace gsprk {

SprkTableau SprkTableau::from_coefficients(Vector c, Vector b, Matrix a, Matrix a_tilde,
                                           std::string name) {
  const auto s = b.size();
  if (s < 1 || c.size() != s || a.rows() != s || a.cols() != s || a_tilde.rows() != s ||
      a_tilde.cols() != s) {
    throw InvalidSpecError("tableau coefficient shapes do not agree");
  }
  SprkTableau t;
  t.s = static_cast<int>(s);
  t.c = std::move(c);
  t.b = std::move(b);
  t.a = std::move(a);
  t.a_tilde = std::move(a_tilde);
  t.c_tilde = t.a_tilde.rowwise().sum();
  t.provenance.name = std::move(name);
  return t;
}

Matrix symplectic_dual(const Vector& b, const Matrix& a) {
  const auto s = b.size();
  Matrix at(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      at(i, j) = (b(i) * b(j) - b(j) * a(j, i)) / b(i);
    }
  }
  return at;
}

SprkTableau build_tableau(const BasisSet& basis, const NodeSet& nodes) {
  const BasisIntegrals ints = compute_integrals(basis, nodes);
  const Vector b = induced_quadrature(ints);
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    if (std::abs(b(i)) < kZeroWeightThreshold) {
      std::ostringstream os;
      os << "induced quadrature weight b_" << (i + 1) << " = " << b(i)
         << " vanishes; basis and nodes are not an admissible pairing";
      throw InvalidSpecError(os.str());
    }
  }
  // a = A_psi M^{-T}  <=>  M a^T = A_psi^T
  const Matrix a = ints.M.partialPivLu().solve(ints.A_psi.transpose()).transpose();

  SprkTableau t = SprkTableau::from_coefficients(nodes.as_vector(), b, a, symplectic_dual(b, a));
  t.provenance.basis = basis.describe();
  std::ostringstream ns;
  for (int i = 0; i < nodes.size(); ++i) ns << (i ? "," : "") << format_real(nodes[i]);
  t.provenance.nodes = ns.str();
  return t;
}

ValidationReport validate_tableau(const SprkTableau& t) {
  ValidationReport r;
  r.consistency_defect = std::abs(t.b.sum() - 1.0);
  r.min_abs_weight = t.b.cwiseAbs().minCoeff();
  for (int i = 0; i < t.s; ++i) {
    r.row_sum_defect = std::max(r.row_sum_defect, std::abs(t.a.row(i).sum() - t.c(i)));
    for (int j = 0; j < t.s; ++j) {
      const double d = t.b(i) * t.a_tilde(i, j) + t.b(j) * t.a(j, i) - t.b(i) * t.b(j);
      r.compatibility_defect = std::max(r.compatibility_defect, std::abs(d));
    }
  }
  r.admissible = r.min_abs_weight >= kZeroWeightThreshold &&
                 r.consistency_defect <= kConsistencyTolerance &&
                 r.compatibility_defect <= kCompatibilityTolerance;
  return r;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  os << "consistency defect |sum b - 1|      = " << format_real(consistency_defect) << "\n"
     << "compatibility defect (symplectic)   = " << format_real(compatibility_defect) << "\n"
     << "row-sum defect |sum_j a_ij - c_i|   = " << format_real(row_sum_defect) << "\n"
     << "min |b_i|                           = " << format_real(min_abs_weight) << "\n"
     << "admissible                          = " << (admissible ? "yes" : "no") << "\n";
  return os.str();
}

namespace {

void render_block(std::ostringstream& os, const Vector& left, const Matrix& m, const Vector& b) {
  constexpr int kWidth = 15;
  auto cell = [&](double x) {
    std::string s = format_fixed(x, 10);
    if (static_cast<int>(s.size()) < kWidth) s.insert(0, kWidth - s.size(), ' ');
    return s;
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << cell(left(i)) << " |";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << cell(m(i, j));
    os << "\n";
  }
  os << std::string(kWidth, '-') << "-+" << std::string(kWidth * m.cols(), '-') << "\n";
  os << std::string(kWidth, ' ') << " |";
  for (Eigen::Index j = 0; j < b.size(); ++j) os << cell(b(j));
  os << "\n";
}

}  // namespace

std::string render_text(const SprkTableau& t) {
  std::ostringstream os;
  if (!t.provenance.name.empty()) os << "method: " << t.provenance.name << "\n";
  if (!t.provenance.basis.empty()) {
    os << "basis:  " << t.provenance.basis << "\nnodes:  " << t.provenance.nodes << "\n";
  }
  os << "stages: " << t.s << "\n\n";
  os << "c | a\n";
  render_block(os, t.c, t.a, t.b);
  os << "\nc~ | a~\n";
  render_block(os, t.c_tilde, t.a_tilde, t.b);
  return os.str();
}

std::string render_csv(const SprkTableau& t) {
  std::ostringstream os;
  os << "i,j,c_i,b_i,a_ij,atilde_ij\n";
  for (int i = 0; i < t.s; ++i) {
    for (int j = 0; j < t.s; ++j) {
      os << (i + 1) << ',' << (j + 1) << ',' << format_real(t.c(i)) << ','
         << format_real(t.b(i)) << ',' << format_real(t.a(i, j)) << ','
         << format_real(t.a_tilde(i, j)) << '\n';
    }
  }
  return os.str();
}

}  // namespace gsprk
