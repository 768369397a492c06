#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsprk/basis.hpp"
#include "gsprk/tableau.hpp"

namespace gsprk {

/// Either a named preset or an explicit basis/s/nodes triple.
struct MethodSpec {
  std::optional<std::string> preset;
  std::optional<BasisKind> basis;
  std::optional<int> s;
  std::vector<double> nodes;
};

/// A method spec resolved to its basis, nodes and Galerkin tableau.
struct ResolvedMethod {
  std::string name;
  BasisSet basis;
  NodeSet nodes;
  SprkTableau tableau;
  std::string note;  // shown in verbose output, may be empty
};

/// symplectic_euler, midpoint, adjoint_euler, stormer_verlet, trig3, cheb1,
/// cheb2, cheb3.
std::vector<std::string> preset_names();

ResolvedMethod resolve_preset(const std::string& name);

/// Throws InvalidSpecError for an unknown preset, a missing or mismatched
/// stage count, or an inadmissible basis/node pairing.
ResolvedMethod resolve_method(const MethodSpec& spec);

/// "monomial", "lagrange" or "trig".
BasisKind parse_basis_kind(const std::string& text);

/// Explicit Euler written as a partitioned pair (a = at = 0, b = 1). Not
/// symplectic; kept as a control for the diagnostics.
SprkTableau explicit_euler_tableau();

}  // namespace gsprk
