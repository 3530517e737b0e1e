#pragma once

/// Scalar special functions used throughout the library: log-gamma,
/// reciprocal gamma, digamma, Pochhammer symbols in log space and
/// principal-branch complex powers.
///
/// All functions are pure. Products and ratios of gamma functions are kept
/// as LogSigned values and only exponentiated by the caller.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "nufn/error.hpp"

namespace nufn {

using complex = std::complex<double>;

/// A real number stored as sign * exp(log_abs). A zero is log_abs = -inf.
struct LogSigned {
  double log_abs = 0.0;
  int sign = 1;

  double value() const { return sign * std::exp(log_abs); }

  friend LogSigned operator*(LogSigned lhs, LogSigned rhs) {
    return {lhs.log_abs + rhs.log_abs, lhs.sign * rhs.sign};
  }
  friend LogSigned operator/(LogSigned lhs, LogSigned rhs) {
    return {lhs.log_abs - rhs.log_abs, lhs.sign * rhs.sign};
  }
};

namespace detail {

// Godfrey's g = 607/128, 15-term Lanczos sum.
inline constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

// Taylor coefficients of ln Gamma(1 + e): -gamma, then (-1)^k zeta(k) / k.
inline constexpr std::array<double, 30> kLogGammaAtOne = {
    -0.57721566490153286061, 0.82246703342411321824,  -0.40068563438653142847,
    0.27058080842778454788,  -0.20738555102867398527, 0.16955717699740818995,
    -0.14404989676884611812, 0.12550966952474304242,  -0.11133426586956469049,
    0.10009945751278180853,  -0.090954017145829042233, 0.083353840546109004025,
    -0.076932516411352191473, 0.071432946295361336059, -0.066668705882420468033,
    0.062500955141213040742, -0.058823978658684582339, 0.055555767627403611102,
    -0.052631679379616660734, 0.05000004769810169364,  -0.047619070330142227991,
    0.045454556293204669442, -0.043478266053040259361, 0.041666669150341210469,
    -0.040000001192140140586, 0.038461539034675185706, -0.037037037312989325549,
    0.035714285847333358028, -0.034482758684919300811, 0.033333333364377581081};

inline double log_gamma_near_one(double eps) {
  double acc = 0.0;
  for (auto it = kLogGammaAtOne.rbegin(); it != kLogGammaAtOne.rend(); ++it) acc = acc * eps + *it;
  return acc * eps;
}

inline double log_gamma_lanczos(double x) {
  constexpr double kSqrtTwoPi = 2.5066282746310005024;
  double base = x + 5.24218750000000000;  // g + 1/2
  double series = kLanczos[0];
  double denom = x;
  for (std::size_t j = 1; j < kLanczos.size(); ++j) {
    denom += 1.0;
    series += kLanczos[j] / denom;
  }
  return (x + 0.5) * std::log(base) - base + std::log(kSqrtTwoPi * series / x);
}

}  // namespace detail

/// sin(pi x) with exact zeros at the integers.
inline double sin_pi(double x) {
  double r = x - 2.0 * std::nearbyint(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

/// ln Gamma(x) for x > 0. Relative error is a few ulps away from the roots
/// at 1 and 2, where a Taylor series keeps the result accurate in absolute
/// terms down to ~1e-17.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  if (std::abs(x - 1.0) <= 0.25) return detail::log_gamma_near_one(x - 1.0);
  if (std::abs(x - 2.0) <= 0.25) return std::log1p(x - 2.0) + detail::log_gamma_near_one(x - 2.0);
  if (x > 1e15) return (x - 0.5) * std::log(x) - x + 0.91893853320467274178;
  return detail::log_gamma_lanczos(x);
}

/// ln|Gamma(x)| for any real x; +inf at the poles.
inline double log_abs_gamma(double x) {
  if (x > 0.0) return log_gamma(x);
  double s = sin_pi(x);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(std::numbers::pi) - std::log(std::abs(s)) - log_gamma(1.0 - x);
}

/// 1/Gamma(x) as a LogSigned: -inf log-magnitude at the poles of Gamma.
inline LogSigned log_reciprocal_gamma(double x) {
  if (x > 0.0) return {-log_gamma(x), 1};
  double s = sin_pi(x);
  if (s == 0.0) return {-std::numeric_limits<double>::infinity(), 1};
  return {-log_abs_gamma(x), s > 0.0 ? 1 : -1};
}

/// 1/Gamma(x). Entire: exactly zero at 0, -1, -2, ...
inline double reciprocal_gamma(double x) {
  if (x > 0.0) return std::exp(-log_gamma(x));
  if (x == std::floor(x)) return 0.0;
  return sin_pi(x) / std::numbers::pi * std::exp(log_gamma(1.0 - x));
}

/// psi(x) = d/dx ln Gamma(x) for x > 0; absolute error below 1e-13.
inline double digamma(double x) {
  if (!(x > 0.0)) throw domain_error("digamma: argument must be positive");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  double inv2 = 1.0 / (x * x);
  // Bernoulli tail: B_2k / (2k x^2k), k = 1..7
  double tail =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return shift + std::log(x) - 0.5 / x - tail;
}

/// (x)_E = Gamma(x + E) / Gamma(x) for x > 0, E >= 0, in log space.
inline LogSigned pochhammer(double x, double E) {
  if (!(x > 0.0)) throw domain_error("pochhammer: base must be positive");
  if (!(E >= 0.0)) throw domain_error("pochhammer: order must be non-negative");
  if (E == 0.0) return {0.0, 1};
  return {log_gamma(x + E) - log_gamma(x), 1};
}

/// arg w folded into (-pi, pi]; a negative real with a -0.0 imaginary part maps to +pi.
inline double principal_arg(complex w) {
  double a = std::arg(w);
  return a == -std::numbers::pi ? std::numbers::pi : a;
}

/// w^E on the principal branch, |w|^E exp(i E arg w) with arg in (-pi, pi].
inline complex complex_pow(complex w, double E) {
  if (w == complex{}) {
    if (E > 0.0) return {};
    throw domain_error("complex_pow: zero base needs a positive exponent");
  }
  if (E == 0.0) return {1.0, 0.0};
  if (w.imag() == 0.0 && w.real() > 0.0) return {std::pow(w.real(), E), 0.0};
  return std::polar(std::pow(std::abs(w), E), E * principal_arg(w));
}

/// Principal logarithm; the caller guarantees w != 0.
inline complex principal_log(complex w) { return {std::log(std::abs(w)), principal_arg(w)}; }

}  // namespace nufn
