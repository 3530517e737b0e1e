#pragma once

/// Coherent-state kernels for the generalized hypergeometric families, on
/// the discrete spectrum (Fock index n) and on the continuous spectrum
/// (energy E >= 0). One label type, a complex z, serves both.
///
/// A continuous-spectrum state needs nu_{p,q}(|z|^2) > 0, so z = 0 is
/// outside its domain (nu(0) = 0), unlike the discrete vacuum.

#include <cmath>
#include <complex>
#include <cstddef>

#include "nufn/error.hpp"
#include "nufn/nu.hpp"
#include "nufn/quadrature.hpp"
#include "nufn/special.hpp"

namespace nufn {

/// A value with an absolute error estimate.
struct Estimate {
  complex value;
  double error = 0.0;
};

/// Coefficient of |n> in the discrete state: z^n / sqrt(rho(n) pFq(|z|^2)).
inline complex cs_coefficient_discrete(const StructureFn& sf, complex z, std::size_t n) {
  const double r2 = std::norm(z);
  if (r2 == 0.0) return n == 0 ? complex{1.0, 0.0} : complex{};
  double log_norm = pfq_series_log(sf.params(), r2);
  double log_mag = static_cast<double>(n) * std::log(std::abs(z)) - 0.5 * rho_discrete(sf, n).log_abs -
                   0.5 * log_norm;
  return std::polar(std::exp(log_mag), static_cast<double>(n) * principal_arg(z));
}

/// Coefficient of |n> in the Klauder-Perelomov dual state, whose structure
/// constants and normalizer carry the swapped family (q, p, b, a).
inline complex kp_coefficient(const StructureFn& sf, complex z, std::size_t n) {
  return cs_coefficient_discrete(sf.swapped(), z, n);
}

namespace detail {

inline double log_normalizer(const StructureFn& sf, double r2, const QuadSpec& spec, double* rel_err = nullptr) {
  if (!(r2 > 0.0)) throw domain_error("continuous coherent state needs |z|^2 > 0");
  ScaledResult n = nu_general_scaled(sf, r2, spec);
  if (rel_err) *rel_err = n.rel_error();
  return n.log_value().real();
}

}  // namespace detail

/// Coefficient of |E> in the continuous state: z^E / sqrt(rho(E) nu_{p,q}(|z|^2)).
inline complex cs_coefficient_continuous(const StructureFn& sf, complex z, double E, const QuadSpec& spec = {}) {
  double log_norm = detail::log_normalizer(sf, std::norm(z), spec);
  double log_mag = E * std::log(std::abs(z)) - 0.5 * rho_continuous(sf, E).log_abs - 0.5 * log_norm;
  return std::polar(std::exp(log_mag), E * principal_arg(z));
}

inline Estimate overlap_continuous_detailed(const StructureFn& sf, complex z, complex z2,
                                            const QuadSpec& spec = {}) {
  double e1 = 0.0, e2 = 0.0;
  double log1 = detail::log_normalizer(sf, std::norm(z), spec, &e1);
  double log2 = detail::log_normalizer(sf, std::norm(z2), spec, &e2);
  ScaledResult cross = nu_general_scaled(sf, std::conj(z) * z2, spec);
  complex value = cross.mantissa * std::exp(cross.log_scale - 0.5 * (log1 + log2));
  double rel = cross.rel_error() + 0.5 * (e1 + e2);
  return {value, std::abs(value) * rel};
}

/// <z|z2> = nu_{p,q}(conj(z) z2) / sqrt(nu_{p,q}(|z|^2) nu_{p,q}(|z2|^2)).
inline complex overlap_continuous(const StructureFn& sf, complex z, complex z2, const QuadSpec& spec = {}) {
  return overlap_continuous_detailed(sf, z, z2, spec).value;
}

inline Estimate transition_density_detailed(const StructureFn& sf, double z_mod_sq, double E,
                                            const QuadSpec& spec = {}) {
  if (!(E >= 0.0)) throw domain_error("transition_density: E must be non-negative");
  double rel = 0.0;
  double log_norm = detail::log_normalizer(sf, z_mod_sq, spec, &rel);
  double value = std::exp(E * std::log(z_mod_sq) - rho_continuous(sf, E).log_abs - log_norm);
  return {value, value * rel};
}

/// P_E(|z|^2) = |z|^(2E) / (rho(E) nu_{p,q}(|z|^2)), a probability density in E.
inline double transition_density(const StructureFn& sf, double z_mod_sq, double E, const QuadSpec& spec = {}) {
  return transition_density_detailed(sf, z_mod_sq, E, spec).value.real();
}

/// e^{-x} x^n / n!.
inline double poisson_density_discrete(double z_mod_sq, std::size_t n) {
  if (!(z_mod_sq >= 0.0)) throw domain_error("poisson_density_discrete: |z|^2 must be non-negative");
  if (z_mod_sq == 0.0) return n == 0 ? 1.0 : 0.0;
  double nd = static_cast<double>(n);
  return std::exp(nd * std::log(z_mod_sq) - z_mod_sq - log_gamma(nd + 1.0));
}

/// Side-by-side values of the series normalizer and its integral counterpart.
/// The two are not equal at finite w; for p = q = 0 their ratio tends to 1.
struct DcLimitReport {
  double w = 0.0;
  double series = 0.0;        // pFq(w), inf if it overflows
  double integral = 0.0;      // nu_{p,q}(w), inf if it overflows
  double log_series = 0.0;
  double log_integral = 0.0;  // -inf at w = 0
  double ratio = 0.0;         // integral / series
};

inline DcLimitReport dc_limit_check(const StructureFn& sf, double w, const QuadSpec& spec = {}) {
  if (convergence_domain(sf) != ConvergenceDomain::entire)
    throw domain_error("dc_limit_check: needs an entire family (p <= q)");
  if (!(w >= 0.0)) throw domain_error("dc_limit_check: w must be non-negative");
  DcLimitReport r;
  r.w = w;
  r.log_series = pfq_series_log(sf.params(), w);
  r.series = std::exp(r.log_series);
  ScaledResult integral = nu_general_scaled(sf, w, spec);
  r.log_integral = integral.log_value().real();
  r.integral = integral.value().real();
  r.ratio = std::exp(r.log_integral - r.log_series);
  return r;
}

}  // namespace nufn
