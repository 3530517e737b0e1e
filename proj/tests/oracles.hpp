#pragma once

// Reference values and generators shared by the test binaries. Everything
// here is independent of the library's own quadrature and gamma code.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace oracle {

/// Composite Simpson for int_0^{E_max} w^E / Gamma(E+1) dE, via std::tgamma.
inline double nu_simpson(double w, double step = 1e-4, double e_max = 60.0) {
  const long n = static_cast<long>(std::llround(e_max / step));
  auto f = [w](double E) { return std::pow(w, E) / std::tgamma(E + 1.0); };
  double acc = f(0.0) + f(e_max);
  for (long i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(step * static_cast<double>(i));
  return acc * step / 3.0;
}

/// Composite Simpson for int_0^{E_max} w^(alpha+E) / Gamma(alpha+E+1) dE.
inline double nu_alpha_simpson(double w, double alpha, double step = 1e-4, double e_max = 60.0) {
  const long n = static_cast<long>(std::llround(e_max / step));
  auto f = [=](double E) { return std::pow(w, alpha + E) / std::tgamma(alpha + E + 1.0); };
  double acc = f(0.0) + f(e_max);
  for (long i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(step * static_cast<double>(i));
  return acc * step / 3.0;
}

// High-precision values (50-digit arithmetic, rounded).
inline constexpr double kNuOne = 2.2665345076998488351;
inline constexpr double kNuQuarter = 0.70881773823673714559;
inline constexpr double kNuPoint15 = 0.54460206433940449899;
// int d^2z/pi e^{-|z|^2} nu(xz) nu(y conj z) with nu on the principal branch;
// the angular integral gives a sinc(pi(E - E')) kernel instead of a delta.
inline constexpr double kGaussianLhs_03_05 = 0.43821114052589695814;
inline constexpr double kGaussianLhs_05_05 = 0.59973144783879201684;

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Fixed-seed generator so property tests are reproducible.
inline std::mt19937_64 rng(std::uint64_t seed = 20240517) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Uniform on the disc |z| <= r_max, avoiding a small hole around 0.
inline std::complex<double> disc_point(std::mt19937_64& g, double r_min, double r_max) {
  double r = uniform(g, r_min, r_max);
  double phi = uniform(g, -3.141592653589793, 3.141592653589793);
  return std::polar(r, phi);
}

}  // namespace oracle
