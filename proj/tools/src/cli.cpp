#include "gsprk_cli/cli.hpp"

#include <charconv>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef GSPRK_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "gsprk/diagnostics.hpp"
#include "gsprk/errors.hpp"
#include "gsprk/format.hpp"
#include "gsprk/integrator.hpp"
#include "gsprk/methods.hpp"
#include "gsprk/systems.hpp"
#include "gsprk/verify.hpp"

namespace gsprk::cli {
namespace {

std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string item = text.substr(start, comma - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string{} : item.substr(first, last - first + 1);
    double value = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size() ||
        !std::isfinite(value)) {
      throw InvalidSpecError(flag + ": '" + item + "' is not a real number");
    }
    out.push_back(value);
    start = comma + 1;
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct MethodOptions {
  std::string preset;
  std::string basis;
  int s = 0;
  std::string nodes;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "named method: " + preset_list());
    cmd->add_option("--basis", basis, "basis kind: monomial, lagrange or trig");
    cmd->add_option("--s", s, "number of stages");
    cmd->add_option("--nodes", nodes, "comma-separated quadrature nodes in [0,1]");
  }

  [[nodiscard]] ResolvedMethod resolve() const {
    MethodSpec spec;
    if (!preset.empty()) spec.preset = preset;
    if (!basis.empty()) spec.basis = parse_basis_kind(basis);
    if (s != 0) spec.s = s;
    spec.nodes = parse_reals(nodes, "--nodes");
    if (!spec.preset && !spec.basis) throw InvalidSpecError("give --preset or --basis/--s/--nodes");
    return resolve_method(spec);
  }

  static std::string preset_list() {
    std::string out;
    for (const auto& n : preset_names()) out += (out.empty() ? "" : ", ") + n;
    return out;
  }
};

struct StateOptions {
  std::string q0;
  std::string p0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--q0", q0, "comma-separated initial positions");
    cmd->add_option("--p0", p0, "comma-separated initial momenta");
  }

  [[nodiscard]] PhasePoint resolve(const HamiltonianSystem& system) const {
    PhasePoint x = default_initial_state(system.name);
    if (!q0.empty()) x.q = to_vector(parse_reals(q0, "--q0"));
    if (!p0.empty()) x.p = to_vector(parse_reals(p0, "--p0"));
    if (x.q.size() != system.n || x.p.size() != system.n) {
      throw InvalidSpecError("system '" + system.name + "' needs " + std::to_string(system.n) +
                             " entries in --q0 and --p0");
    }
    return x;
  }
};

// Writes to --out when given, otherwise to the standard stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw InvalidSpecError("cannot open '" + path + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  [[nodiscard]] bool is_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

void check_format(const std::string& format) {
  if (format != "text" && format != "csv") {
    throw InvalidSpecError("--format must be text or csv");
  }
}

int cmd_tableau(const MethodOptions& method, const std::string& format, const std::string& out_path,
                bool verbose, std::ostream& out, std::ostream& err) {
  check_format(format);
  const ResolvedMethod m = method.resolve();
  const ValidationReport report = validate_tableau(m.tableau);
  if (!report.admissible) {
    err << "inadmissible tableau\n" << report.to_string() << '\n';
    return kExitInvalidSpec;
  }
  Sink sink(out_path, out);
  if (format == "csv") {
    *sink << render_csv(m.tableau);
  } else {
    *sink << render_text(m.tableau);
  }
  if (verbose) {
    err << report.to_string() << '\n';
    if (!m.note.empty()) err << "note: " << m.note << '\n';
  }
  return kExitOk;
}

struct IntegrateOptions {
  std::string system;
  double h = 0.0;
  int steps = 0;
  std::string momentum;
  std::string out_path;
};

void write_rows(std::ostream& os, const HamiltonianSystem& system, const Trajectory& traj,
                const std::optional<SymmetryGenerator>& generator) {
  const std::vector<double> energy = energy_series(system, traj);
  std::vector<double> momentum;
  if (generator) momentum = momentum_series(traj, *generator);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& x = traj.states[k];
    os << k << ',' << format_real(traj.times[k]);
    for (Eigen::Index i = 0; i < x.q.size(); ++i) os << ',' << format_real(x.q(i));
    for (Eigen::Index i = 0; i < x.p.size(); ++i) os << ',' << format_real(x.p(i));
    os << ',' << format_real(energy[k]);
    if (generator) os << ',' << format_real(momentum[k]);
    os << '\n';
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

int cmd_integrate(const IntegrateOptions& opt, const MethodOptions& method,
                  const StateOptions& state, bool verbose, std::ostream& out, std::ostream& err) {
  const HamiltonianSystem system = builtin(opt.system);
  const ResolvedMethod m = method.resolve();
  const PhasePoint x0 = state.resolve(system);
  StepperConfig cfg;
  cfg.h = opt.h;
  cfg.validate();
  if (opt.steps < 1) throw InvalidSpecError("--steps must be at least 1");
  std::optional<SymmetryGenerator> generator;
  if (!opt.momentum.empty()) {
    if (opt.momentum != "rotation") throw InvalidSpecError("--momentum supports only 'rotation'");
    if (system.n != 2) {
      throw InvalidSpecError("--momentum rotation needs a planar system (n = 2)");
    }
    generator = planar_rotation();
  }
  if (verbose) {
    err << "method: " << m.name << '\n';
    if (!m.note.empty()) err << "note: " << m.note << '\n';
  }

  Sink sink(opt.out_path, out);
  std::ostream& csv = *sink;
  csv << "k,t";
  for (int i = 1; i <= system.n; ++i) csv << ",q_" << i;
  for (int i = 1; i <= system.n; ++i) csv << ",p_" << i;
  csv << ",energy_error";
  if (generator) csv << ",momentum_error";
  csv << '\n';

  const SprkStepper stepper(system, m.tableau, cfg);
  Trajectory traj;
  try {
    traj = integrate(stepper, x0.q, x0.p, opt.steps);
  } catch (const IntegrationError& e) {
    write_rows(csv, system, e.partial(), generator);
    csv << "# truncated at step " << e.failed_step() << ": " << e.what() << '\n';
    csv.flush();
    err << "integration failed at step " << e.failed_step() << ": " << e.what() << '\n';
    return kExitNumerical;
  }
  write_rows(csv, system, traj, generator);
  csv.flush();

  const PhasePoint& last = traj.back();
  out << "# final t=" << format_real(traj.times.back()) << " q=" << join_reals(last.q)
      << " p=" << join_reals(last.p)
      << " max_energy_error=" << format_real(max_abs(energy_series(system, traj)));
  if (generator) out << " max_momentum_error=" << format_real(momentum_drift(traj, *generator));
  out << '\n';
  return kExitOk;
}

struct ConvergenceOptions {
  std::string system;
  double T = 0.0;
  std::string h_list;
  std::string reference;
  std::string format = "text";
};

int cmd_convergence(const ConvergenceOptions& opt, const MethodOptions& method,
                    const StateOptions& state, bool verbose, std::ostream& out,
                    std::ostream& err) {
  check_format(opt.format);
  const HamiltonianSystem system = builtin(opt.system);
  const ResolvedMethod m = method.resolve();
  const PhasePoint x0 = state.resolve(system);
  const std::vector<double> hs = parse_reals(opt.h_list, "--h-list");

  ReferenceSolution reference;
  std::string reference_kind = opt.reference;
  if (reference_kind.empty()) reference_kind = system.exact_flow ? "exact" : "";
  if (reference_kind == "exact") {
    auto ref = exact_reference(system);
    if (!ref) {
      throw InvalidSpecError("system '" + system.name +
                             "' has no exact solution; pass --reference gauss");
    }
    reference = *ref;
  } else if (reference_kind == "gauss") {
    if (hs.empty()) throw InvalidSpecError("--h-list is empty");
    reference = gauss_reference(system, *std::min_element(hs.begin(), hs.end()) / 100.0);
  } else if (reference_kind.empty()) {
    throw InvalidSpecError("system '" + system.name +
                           "' has no exact solution and no reference is configured; pass "
                           "--reference gauss");
  } else {
    throw InvalidSpecError("--reference must be exact or gauss");
  }

  const ConvergenceStudy study =
      convergence_order(system, m.tableau, x0.q, x0.p, opt.T, hs, reference);
  if (verbose) err << "method: " << m.name << ", reference: " << reference_kind << '\n';
  if (opt.format == "csv") {
    out << "h,error\n";
    for (std::size_t i = 0; i < study.step_sizes.size(); ++i) {
      out << format_real(study.step_sizes[i]) << ',' << format_real(study.errors[i]) << '\n';
    }
    out << "# slope," << format_real(study.slope) << '\n';
  } else {
    out << "h                        error\n";
    for (std::size_t i = 0; i < study.step_sizes.size(); ++i) {
      std::string h = format_real(study.step_sizes[i]);
      h.resize(std::max<std::size_t>(h.size() + 1, 25), ' ');
      out << h << format_real(study.errors[i]) << '\n';
    }
    out << "slope: " << format_fixed(study.slope, 4) << " (" << study.points_used
        << " points above the rounding floor)\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& scope, std::ostream& out) {
  const std::vector<CheckResult> checks = run_verification(scope);
  out << render_checks(checks);
  for (const auto& c : checks) {
    if (!c.passed) return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Galerkin symplectic partitioned Runge-Kutta methods", "gsprk"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print method notes and validation details");

  MethodOptions tab_method;
  std::string tab_format = "text";
  std::string tab_out;
  auto* tableau = app.add_subcommand("tableau", "build and print a Galerkin SPRK tableau");
  tab_method.attach(tableau);
  tableau->add_option("--format", tab_format, "text or csv");
  tableau->add_option("--out", tab_out, "write to PATH instead of standard output");

  IntegrateOptions int_opt;
  MethodOptions int_method;
  StateOptions int_state;
  auto* integ = app.add_subcommand("integrate", "integrate a builtin system, CSV trajectory");
  integ->set_help_flag();
  integ->add_option("--system", int_opt.system, "builtin system")->required();
  int_method.attach(integ);
  int_state.attach(integ);
  integ->add_option("--h", int_opt.h, "step size")->required();
  integ->add_option("--steps", int_opt.steps, "number of steps")->required();
  integ->add_option("--momentum", int_opt.momentum, "momentum map column: rotation");
  integ->add_option("--out", int_opt.out_path, "write the CSV to PATH");

  ConvergenceOptions conv_opt;
  MethodOptions conv_method;
  StateOptions conv_state;
  auto* conv = app.add_subcommand("convergence", "empirical order against a reference");
  conv->add_option("--system", conv_opt.system, "builtin system")->required();
  conv_method.attach(conv);
  conv_state.attach(conv);
  conv->add_option("--T", conv_opt.T, "final time")->required();
  conv->add_option("--h-list", conv_opt.h_list, "comma-separated step sizes dividing T")
      ->required();
  conv->add_option("--reference", conv_opt.reference,
                   "exact (default when available) or gauss");
  conv->add_option("--format", conv_opt.format, "text or csv");

  std::string scope = "all";
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("scope", scope,
                     "tableaux, symplecticity, equivalence, noether, generating, hj or all");

  for (auto* sub : {tableau, integ, conv, verify}) {
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_flag("-v,--verbose", verbose, "print method notes and validation details");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidSpec;
  }

  try {
    if (*tableau) return cmd_tableau(tab_method, tab_format, tab_out, verbose, out, err);
    if (*integ) return cmd_integrate(int_opt, int_method, int_state, verbose, out, err);
    if (*conv) return cmd_convergence(conv_opt, conv_method, conv_state, verbose, out, err);
    if (*verify) return cmd_verify(scope, out);
  } catch (const InvalidSpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidSpec;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalidSpec;
}

}  // namespace gsprk::cli
