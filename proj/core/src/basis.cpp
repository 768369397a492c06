#include "gsprk/basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "gsprk/errors.hpp"

namespace gsprk {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_size(int s) {
  if (s < 1) {
    throw InvalidSpecError("basis size s must be at least 1, got " + std::to_string(s));
  }
}

// Multiplies polynomial `poly` (ascending coefficients) by (tau - root).
std::vector<double> times_linear(const std::vector<double>& poly, double root) {
  std::vector<double> out(poly.size() + 1, 0.0);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    out[k + 1] += poly[k];
    out[k] -= root * poly[k];
  }
  return out;
}

double polynomial_antiderivative(const std::vector<double>& coeffs, double upper) {
  // Horner on sum_k coeffs[k] upper^(k+1) / (k+1).
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * upper + coeffs[k] / static_cast<double>(k + 1);
  }
  return acc * upper;
}

}  // namespace

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Monomial: return "monomial";
    case BasisKind::LagrangeAtNodes: return "lagrange";
    case BasisKind::Trigonometric: return "trig";
    case BasisKind::Custom: return "custom";
  }
  return "unknown";
}

double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);  // r in [-1, 1]
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

double cos_pi(double x) {
  const double r = std::remainder(x, 2.0);
  if (r == 0.0) return 1.0;
  if (r == 1.0 || r == -1.0) return -1.0;
  if (r == 0.5 || r == -0.5) return 0.0;
  return std::cos(kPi * r);
}

// --- NodeSet ----------------------------------------------------------------

NodeSet::NodeSet(std::vector<double> c) : c_(std::move(c)) {
  if (c_.empty()) throw InvalidSpecError("node set is empty");
  for (double x : c_) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      std::ostringstream os;
      os << "node " << x << " lies outside [0,1]";
      throw InvalidSpecError(os.str());
    }
  }
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = i + 1; j < c_.size(); ++j) {
      if (c_[i] == c_[j]) throw InvalidSpecError("duplicate nodes");
    }
  }
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (!(c_[i - 1] < c_[i])) throw InvalidSpecError("nodes must be strictly increasing");
  }
}

Vector NodeSet::as_vector() const {
  return Eigen::Map<const Vector>(c_.data(), static_cast<Eigen::Index>(c_.size()));
}

NodeSet chebyshev_nodes(int s) {
  // Roots of G_1 = x, G_2 = (3x^2 - 1)/3, G_3 = (2x^3 - x)/2.
  std::vector<double> roots;
  switch (s) {
    case 1: roots = {0.0}; break;
    case 2: roots = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}; break;
    case 3: roots = {-1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)}; break;
    default:
      throw InvalidSpecError("chebyshev nodes are available for 1 <= s <= 3, got " +
                             std::to_string(s));
  }
  std::vector<double> c;
  c.reserve(roots.size());
  for (double x : roots) c.push_back(0.5 * (x + 1.0));
  return NodeSet(std::move(c));
}

// --- BasisSet ---------------------------------------------------------------

BasisSet BasisSet::monomial(int s) {
  require_positive_size(s);
  BasisSet b;
  b.kind_ = BasisKind::Monomial;
  b.s_ = s;
  b.contains_constant_ = true;
  b.label_ = "monomial";
  return b;
}

BasisSet BasisSet::lagrange(const NodeSet& interpolation_nodes) {
  BasisSet b;
  b.kind_ = BasisKind::LagrangeAtNodes;
  b.s_ = interpolation_nodes.size();
  b.contains_constant_ = true;
  b.label_ = "lagrange";
  b.lagrange_nodes_ = interpolation_nodes.values();
  const auto& x = b.lagrange_nodes_;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> poly{1.0};
    double denom = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      poly = times_linear(poly, x[j]);
      denom *= x[i] - x[j];
    }
    for (double& coeff : poly) coeff /= denom;
    b.lagrange_coefficients_.push_back(std::move(poly));
  }
  return b;
}

BasisSet BasisSet::trigonometric(int s) {
  require_positive_size(s);
  BasisSet b;
  b.kind_ = BasisKind::Trigonometric;
  b.s_ = s;
  b.contains_constant_ = true;
  b.label_ = "trig";
  return b;
}

BasisSet BasisSet::custom(std::vector<Function> functions, bool contains_constant,
                          std::string label) {
  require_positive_size(static_cast<int>(functions.size()));
  BasisSet b;
  b.kind_ = BasisKind::Custom;
  b.s_ = static_cast<int>(functions.size());
  b.contains_constant_ = contains_constant;
  b.label_ = std::move(label);
  b.custom_ = std::move(functions);
  return b;
}

double BasisSet::value(int i, double tau) const {
  switch (kind_) {
    case BasisKind::Monomial:
      return std::pow(tau, i);
    case BasisKind::LagrangeAtNodes: {
      // Product form keeps l_i(x_j) = delta_ij exact.
      const auto& x = lagrange_nodes_;
      const auto ii = static_cast<std::size_t>(i);
      double v = 1.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != ii) v *= (tau - x[j]) / (x[ii] - x[j]);
      }
      return v;
    }
    case BasisKind::Trigonometric: {
      if (i == 0) return 1.0;
      const int k = (i + 1) / 2;
      return (i % 2 == 1) ? cos_pi(k * tau) : sin_pi(k * tau);
    }
    case BasisKind::Custom:
      return custom_[static_cast<std::size_t>(i)](tau);
  }
  return 0.0;
}

double BasisSet::integral(int i, double upper) const {
  switch (kind_) {
    case BasisKind::Monomial:
      return std::pow(upper, i + 1) / (i + 1);
    case BasisKind::LagrangeAtNodes:
      return polynomial_antiderivative(lagrange_coefficients_[static_cast<std::size_t>(i)],
                                       upper);
    case BasisKind::Trigonometric: {
      if (i == 0) return upper;
      const int k = (i + 1) / 2;
      const double kpi = k * kPi;
      return (i % 2 == 1) ? sin_pi(k * upper) / kpi : (1.0 - cos_pi(k * upper)) / kpi;
    }
    case BasisKind::Custom:
      return numeric_integral(i, upper);
  }
  return 0.0;
}

double BasisSet::numeric_integral(int i, double upper) const {
  return gauss_legendre_integral([this, i](double tau) { return value(i, tau); }, upper);
}

std::string BasisSet::describe() const {
  std::ostringstream os;
  os << label_ << "(s=" << s_;
  if (kind_ == BasisKind::LagrangeAtNodes) {
    os << ", nodes=";
    for (std::size_t j = 0; j < lagrange_nodes_.size(); ++j) {
      os << (j ? "," : "") << lagrange_nodes_[j];
    }
  }
  os << ")";
  return os.str();
}

BasisSet make_basis(BasisKind kind, int s, std::span<const double> lagrange_nodes) {
  switch (kind) {
    case BasisKind::Monomial: return BasisSet::monomial(s);
    case BasisKind::Trigonometric: return BasisSet::trigonometric(s);
    case BasisKind::LagrangeAtNodes:
      require_positive_size(s);
      if (static_cast<int>(lagrange_nodes.size()) != s) {
        throw InvalidSpecError("lagrange basis needs exactly s nodes");
      }
      return BasisSet::lagrange(NodeSet({lagrange_nodes.begin(), lagrange_nodes.end()}));
    case BasisKind::Custom:
      throw InvalidSpecError("custom bases are built with BasisSet::custom");
  }
  throw InvalidSpecError("unknown basis kind");
}

double gauss_legendre_integral(const BasisSet::Function& f, double upper) {
  using boost::math::quadrature::gauss;
  if (upper == 0.0) return 0.0;
  double mass = 0.0;
  const double fine = gauss<double, 64>::integrate(f, 0.0, upper, &mass);
  const double coarse = gauss<double, 32>::integrate(f, 0.0, upper);
  if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-10 * std::max(1.0, mass)) {
    std::ostringstream os;
    os << "basis quadrature failed to converge on [0," << upper << "]: 64-point "
       << fine << " vs 32-point " << coarse;
    throw NumericalError(os.str());
  }
  return fine;
}

BasisIntegrals compute_integrals(const BasisSet& basis, const NodeSet& nodes) {
  const int s = basis.size();
  if (nodes.size() != s) {
    throw InvalidSpecError("basis has " + std::to_string(s) + " functions but " +
                           std::to_string(nodes.size()) + " nodes were given");
  }
  BasisIntegrals out{Vector(s), Matrix(s, s), Matrix(s, s)};
  for (int i = 0; i < s; ++i) {
    out.B(i) = basis.integral(i, 1.0);
    for (int j = 0; j < s; ++j) {
      out.A_psi(i, j) = basis.integral(j, nodes[i]);
      out.M(i, j) = basis.value(i, nodes[j]);
    }
  }
  return out;
}

double condition_number(const Matrix& m) {
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Vector induced_quadrature(const BasisIntegrals& integrals) {
  const double cond = condition_number(integrals.M);
  if (!(cond <= kMaxConditionNumber)) {
    std::ostringstream os;
    os << "nodes are not unisolvent for the basis: cond(M) = " << cond;
    throw InvalidSpecError(os.str());
  }
  return integrals.M.partialPivLu().solve(integrals.B);
}

}  // namespace gsprk
