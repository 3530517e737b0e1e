#pragma once

#include <cstdio>
#include <string>

#include "nufn/special.hpp"

namespace nufn {

/// %.17g: enough digits for any double to read back bit-identical.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Complex literal in a+bi form; a bare real when the imaginary part is zero.
inline std::string format_complex(complex z) {
  if (z.imag() == 0.0) return format_number(z.real());
  std::string im = format_number(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_number(z.real()) + im + "i";
}

}  // namespace nufn
