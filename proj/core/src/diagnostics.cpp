#include "gsprk/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "gsprk/basis.hpp"
#include "gsprk/errors.hpp"
#include "gsprk/format.hpp"

namespace gsprk {

Matrix canonical_symplectic_matrix(int n) {
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n) = Matrix::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return omega;
}

Matrix step_jacobian(const Stepper& stepper, const PhasePoint& state) {
  const auto n = state.q.size();
  Vector z(2 * n);
  z << state.q, state.p;
  const double eps = 1e-6 * std::max(1.0, z.cwiseAbs().maxCoeff());
  auto map = [&](const Vector& y) {
    const StepResult r = stepper.step(y.head(n), y.tail(n));
    Vector out(2 * n);
    out << r.state.q, r.state.p;
    return out;
  };
  Matrix jac(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < 2 * n; ++k) {
    Vector zp = z, zm = z;
    zp(k) += eps;
    zm(k) -= eps;
    jac.col(k) = (map(zp) - map(zm)) / (2.0 * eps);
  }
  return jac;
}

double symplecticity_defect(const Stepper& stepper, const PhasePoint& state) {
  const Matrix jac = step_jacobian(stepper, state);
  const Matrix omega = canonical_symplectic_matrix(static_cast<int>(state.q.size()));
  const Matrix defect = jac.transpose() * omega * jac - omega;
  return defect.cwiseAbs().rowwise().sum().maxCoeff();
}

double symplecticity_defect(const HamiltonianSystem& system, const SprkTableau& tableau,
                            const StepperConfig& config, const PhasePoint& state) {
  return symplecticity_defect(SprkStepper(system, tableau, config), state);
}

std::vector<double> energy_series(const HamiltonianSystem& system, const Trajectory& trajectory) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  if (trajectory.size() == 0) return out;
  const double h0 = system.energy(trajectory.states.front());
  for (const auto& x : trajectory.states) out.push_back(system.energy(x) - h0);
  return out;
}

std::vector<double> momentum_series(const Trajectory& trajectory,
                                    const SymmetryGenerator& generator) {
  std::vector<double> out;
  out.reserve(trajectory.size());
  if (trajectory.size() == 0) return out;
  const auto n = trajectory.states.front().q.size();
  if (generator.G.rows() != n || generator.G.cols() != n) {
    throw InvalidSpecError("symmetry generator dimension does not match the system");
  }
  const auto& x0 = trajectory.states.front();
  const double j0 = generator.momentum(x0.q, x0.p);
  for (const auto& x : trajectory.states) out.push_back(generator.momentum(x.q, x.p) - j0);
  return out;
}

double momentum_drift(const Trajectory& trajectory, const SymmetryGenerator& generator) {
  double worst = 0.0;
  for (double d : momentum_series(trajectory, generator)) worst = std::max(worst, std::abs(d));
  return worst;
}

EnergyDriftSummary energy_drift(const std::vector<double>& e, double window_fraction) {
  EnergyDriftSummary out;
  if (e.empty()) return out;
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(window_fraction * static_cast<double>(e.size())));
  for (double x : e) out.max_abs_error = std::max(out.max_abs_error, std::abs(x));
  for (std::size_t i = 0; i < window; ++i) {
    out.head_mean += std::abs(e[i]);
    out.tail_mean += std::abs(e[e.size() - 1 - i]);
  }
  out.head_mean /= static_cast<double>(window);
  out.tail_mean /= static_cast<double>(window);
  return out;
}

std::optional<ReferenceSolution> exact_reference(const HamiltonianSystem& system) {
  if (!system.exact_flow) return std::nullopt;
  return ReferenceSolution(*system.exact_flow);
}

ReferenceSolution gauss_reference(const HamiltonianSystem& system, double h_ref,
                                  double tolerance) {
  if (!(h_ref > 0.0)) throw InvalidSpecError("reference step must be positive");
  const NodeSet nodes = chebyshev_nodes(2);
  SprkTableau gauss = build_tableau(BasisSet::lagrange(nodes), nodes);
  gauss.provenance.name = "cheb2";
  return [system, gauss, h_ref, tolerance](const Vector& q0, const Vector& p0, double t) {
    const int steps = std::max(1, static_cast<int>(std::ceil(t / h_ref - 1e-9)));
    auto run = [&](int n_steps) {
      StepperConfig cfg;
      cfg.h = t / n_steps;
      return integrate(SprkStepper(system, gauss, cfg), q0, p0, n_steps).back();
    };
    const PhasePoint coarse = run(steps);
    const PhasePoint fine = run(2 * steps);
    const double diff = std::max((coarse.q - fine.q).cwiseAbs().maxCoeff(),
                                 (coarse.p - fine.p).cwiseAbs().maxCoeff());
    if (diff > tolerance) {
      std::ostringstream os;
      os << "reference solution failed its Richardson check: h and h/2 differ by " << diff;
      throw NumericalError(os.str());
    }
    // One Richardson extrapolation for the fourth-order method.
    PhasePoint out;
    out.q = fine.q + (fine.q - coarse.q) / 15.0;
    out.p = fine.p + (fine.p - coarse.p) / 15.0;
    return out;
  };
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy convergence_order(const HamiltonianSystem& system, const SprkTableau& tableau,
                                   const Vector& q0, const Vector& p0, double T,
                                   const std::vector<double>& h_list,
                                   const ReferenceSolution& reference) {
  if (h_list.size() < 3) throw InvalidSpecError("convergence study needs at least 3 step sizes");
  if (!(T > 0.0)) throw InvalidSpecError("final time T must be positive");
  ConvergenceStudy out;
  const PhasePoint ref = reference(q0, p0, T);
  std::vector<double> log_h, log_e;
  for (double h : h_list) {
    const double ratio = T / h;
    const double steps = std::round(ratio);
    if (!(h > 0.0) || steps < 1.0 || std::abs(ratio - steps) > 1e-9 * ratio) {
      throw InvalidSpecError("step size " + format_real(h) + " does not divide T = " +
                             format_real(T));
    }
    StepperConfig cfg;
    cfg.h = h;
    const PhasePoint end =
        integrate(SprkStepper(system, tableau, cfg), q0, p0, static_cast<int>(steps)).back();
    const double err = std::max((end.q - ref.q).cwiseAbs().maxCoeff(),
                                (end.p - ref.p).cwiseAbs().maxCoeff());
    out.step_sizes.push_back(h);
    out.errors.push_back(err);
    if (err > kRoundingFloor) {
      log_h.push_back(std::log(h));
      log_e.push_back(std::log(err));
    }
  }
  out.points_used = log_h.size();
  if (log_h.size() < 2) {
    throw NumericalError("too few errors above the rounding floor to fit an order");
  }
  out.slope = least_squares_slope(log_h, log_e);
  return out;
}

ConvergenceStudy convergence_order(const HamiltonianSystem& system, const SprkTableau& tableau,
                                   const Vector& q0, const Vector& p0, double T,
                                   const std::vector<double>& h_list) {
  auto ref = exact_reference(system);
  if (!ref) {
    throw InvalidSpecError("system '" + system.name +
                           "' has no exact solution; configure a reference solution");
  }
  return convergence_order(system, tableau, q0, p0, T, h_list, *ref);
}

std::string render_report_csv(const Trajectory& trajectory, const DiagnosticsReport& report) {
  std::ostringstream os;
  os << "k,t,energy_error,momentum_error\n";
  const bool have_momentum = report.momentum_series.has_value();
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    os << k << ',' << format_real(trajectory.times[k]) << ',';
    if (k < report.energy_series.size()) os << format_real(report.energy_series[k]);
    os << ',';
    if (have_momentum && k < report.momentum_series->size()) {
      os << format_real((*report.momentum_series)[k]);
    }
    os << '\n';
  }
  double max_energy = 0.0;
  for (double e : report.energy_series) max_energy = std::max(max_energy, std::abs(e));
  os << "# steps," << (trajectory.size() ? trajectory.size() - 1 : 0) << '\n';
  os << "# max_abs_energy_error," << format_real(max_energy) << '\n';
  if (have_momentum) {
    double max_mom = 0.0;
    for (double m : *report.momentum_series) max_mom = std::max(max_mom, std::abs(m));
    os << "# max_abs_momentum_error," << format_real(max_mom) << '\n';
  }
  if (report.symplecticity_defect) {
    os << "# symplecticity_defect," << format_real(*report.symplecticity_defect) << '\n';
  }
  if (report.order_estimate) os << "# order_estimate," << format_real(*report.order_estimate) << '\n';
  return os.str();
}

}  // namespace gsprk
