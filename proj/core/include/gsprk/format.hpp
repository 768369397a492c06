#pragma once

#include <string>

#include "gsprk/types.hpp"

namespace gsprk {

/// %.17g-style rendering, independent of the global locale.
std::string format_real(double x);

/// Fixed-width rendering for aligned text tables.
std::string format_fixed(double x, int precision = 10);

/// Comma-joined format_real of every entry.
std::string join_reals(const Vector& v, const std::string& sep = ",");

}  // namespace gsprk
