#include "gsprk/format.hpp"

#include <array>
#include <charconv>

namespace gsprk {

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

std::string format_fixed(double x, int precision) {
  std::array<char, 64> buf{};
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::fixed, precision);
  return {buf.data(), res.ptr};
}

std::string join_reals(const Vector& v, const std::string& sep) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_real(v(i));
  }
  return out;
}

}  // namespace gsprk
