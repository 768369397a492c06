#pragma once

#include <iosfwd>

namespace gsprk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidSpec = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the `gsprk` tool with injectable streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsprk::cli
