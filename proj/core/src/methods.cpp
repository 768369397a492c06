#include "gsprk/methods.hpp"

#include <sstream>

#include "gsprk/errors.hpp"
#include "gsprk/format.hpp"

namespace gsprk {
namespace {

struct Preset {
  const char* name;
  BasisKind kind;
  std::vector<double> nodes;  // empty for the Chebyshev family
  int s;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"symplectic_euler", BasisKind::Monomial, {0.0}, 1},
      {"midpoint", BasisKind::Monomial, {0.5}, 1},
      {"adjoint_euler", BasisKind::Monomial, {1.0}, 1},
      {"stormer_verlet", BasisKind::Trigonometric, {0.0, 1.0}, 2},
      {"trig3", BasisKind::Trigonometric, {0.0, 0.5, 1.0}, 3},
      {"cheb1", BasisKind::LagrangeAtNodes, {}, 1},
      {"cheb2", BasisKind::LagrangeAtNodes, {}, 2},
      {"cheb3", BasisKind::LagrangeAtNodes, {}, 3},
  };
  return table;
}

ResolvedMethod assemble(std::string name, BasisSet basis, NodeSet nodes) {
  SprkTableau tableau = build_tableau(basis, nodes);
  tableau.provenance.name = name;
  return ResolvedMethod{std::move(name), std::move(basis), std::move(nodes), std::move(tableau), {}};
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.emplace_back(p.name);
  return out;
}

ResolvedMethod resolve_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (name != p.name) continue;
    const NodeSet nodes = p.nodes.empty() ? chebyshev_nodes(p.s) : NodeSet(p.nodes);
    ResolvedMethod m = assemble(name, make_basis(p.kind, p.s, nodes.values()), nodes);
    if (name == "stormer_verlet") {
      m.note =
          "a_tilde is derived from a and b through b_i at_ij + b_j a_ji = b_i b_j, giving "
          "[[1/2,0],[1/2,0]]; the table [[0,0],[1/2,1/2]] often printed for this basis does "
          "not satisfy that condition";
    }
    return m;
  }
  std::ostringstream os;
  os << "unknown preset '" << name << "' (expected one of";
  for (const auto& p : presets()) os << ' ' << p.name;
  os << ')';
  throw InvalidSpecError(os.str());
}

ResolvedMethod resolve_method(const MethodSpec& spec) {
  if (spec.preset) {
    if (spec.basis || spec.s || !spec.nodes.empty()) {
      throw InvalidSpecError("--preset cannot be combined with --basis, --s or --nodes");
    }
    return resolve_preset(*spec.preset);
  }
  if (!spec.basis) throw InvalidSpecError("a method needs either a preset or a basis");
  if (spec.nodes.empty()) throw InvalidSpecError("an explicit basis needs quadrature nodes");
  const int s = spec.s.value_or(static_cast<int>(spec.nodes.size()));
  if (s < 1) throw InvalidSpecError("stage count s must be at least 1");
  if (static_cast<std::size_t>(s) != spec.nodes.size()) {
    throw InvalidSpecError("s = " + std::to_string(s) + " but " +
                           std::to_string(spec.nodes.size()) + " nodes were given");
  }
  NodeSet nodes(spec.nodes);
  BasisSet basis = make_basis(*spec.basis, s, nodes.values());
  std::string name = basis.describe() + " @ " + join_reals(nodes.as_vector());
  return assemble(std::move(name), std::move(basis), std::move(nodes));
}

BasisKind parse_basis_kind(const std::string& text) {
  if (text == "monomial") return BasisKind::Monomial;
  if (text == "lagrange") return BasisKind::LagrangeAtNodes;
  if (text == "trig") return BasisKind::Trigonometric;
  throw InvalidSpecError("unknown basis '" + text + "' (expected monomial, lagrange or trig)");
}

SprkTableau explicit_euler_tableau() {
  return SprkTableau::from_coefficients(Vector::Zero(1), Vector::Ones(1), Matrix::Zero(1, 1),
                                        Matrix::Zero(1, 1), "explicit_euler");
}

}  // namespace gsprk
