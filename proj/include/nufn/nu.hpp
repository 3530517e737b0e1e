#pragma once

/// The nu-function family.
///
///   nu(w)          = int_0^inf dE w^E / Gamma(E + 1)
///   nu(w, alpha)   = int_0^inf dE w^(alpha + E) / Gamma(alpha + E + 1)
///   nu_{p,q}(w)    = int_0^inf dE w^E / rho_{p,q}(E)
///   pFq(w)         = sum_n w^n / rho_{p,q}(n)
///
/// with the structure function
///
///   rho_{p,q}(E) = Gamma(E + 1) prod_j (b_j)_E / prod_i (a_i)_E.
///
/// Every integral is evaluated with e^{peak} factored out of the quadrature
/// sum (ScaledResult), so ln nu stays available where nu itself overflows.
/// Complex arguments use the principal branch of w^E; accuracy degrades
/// near the negative real axis where the integrand oscillates without decay.
///
/// The series is summed until a term drops below 1e-16 of the partial sum,
/// with a cap of 10000 terms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nufn/error.hpp"
#include "nufn/quadrature.hpp"
#include "nufn/special.hpp"

namespace nufn {

/// Parameter sets {a_i} (numerator, p of them) and {b_j} (denominator, q of them).
struct HyperParams {
  std::vector<double> a;
  std::vector<double> b;

  std::size_t p() const { return a.size(); }
  std::size_t q() const { return b.size(); }

  void validate() const {
    for (double x : a)
      if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("HyperParams: a-parameters must be positive");
    for (double x : b)
      if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("HyperParams: b-parameters must be positive");
  }

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

enum class ConvergenceDomain { entire, unit_disc, divergent };

inline const char* to_string(ConvergenceDomain d) {
  switch (d) {
    case ConvergenceDomain::entire: return "entire";
    case ConvergenceDomain::unit_disc: return "unit_disc";
    case ConvergenceDomain::divergent: return "divergent";
  }
  return "?";
}

/// rho_{p,q} for one parameter family. Immutable; rho(0) = 1.
class StructureFn {
 public:
  StructureFn() = default;
  explicit StructureFn(HyperParams params) : params_(std::move(params)) { params_.validate(); }
  StructureFn(std::vector<double> a, std::vector<double> b)
      : StructureFn(HyperParams{std::move(a), std::move(b)}) {}

  /// The p = q = 0 family, rho(E) = Gamma(E + 1).
  static StructureFn gamma() { return {}; }

  const HyperParams& params() const { return params_; }
  std::size_t p() const { return params_.p(); }
  std::size_t q() const { return params_.q(); }

  /// The family with (p, q, a, b) -> (q, p, b, a).
  StructureFn swapped() const { return StructureFn(params_.b, params_.a); }

  friend bool operator==(const StructureFn&, const StructureFn&) = default;

 private:
  HyperParams params_;
};

inline ConvergenceDomain convergence_domain(const StructureFn& sf) {
  if (sf.p() <= sf.q()) return ConvergenceDomain::entire;
  if (sf.p() == sf.q() + 1) return ConvergenceDomain::unit_disc;
  return ConvergenceDomain::divergent;
}

/// ln rho_{p,q}(n) = ln[n! prod (b_j)_n / prod (a_i)_n].
inline LogSigned rho_discrete(const StructureFn& sf, std::size_t n) {
  const auto& hp = sf.params();
  if (n > 256) {
    double acc = log_gamma(static_cast<double>(n) + 1.0);
    for (double b : hp.b) acc += pochhammer(b, static_cast<double>(n)).log_abs;
    for (double a : hp.a) acc -= pochhammer(a, static_cast<double>(n)).log_abs;
    return {acc, 1};
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double kd = static_cast<double>(k);
    double factor = kd + 1.0;
    for (double b : hp.b) factor *= b + kd;
    for (double a : hp.a) factor /= a + kd;
    acc += std::log(factor);
  }
  return {acc, 1};
}

/// ln rho_{p,q}(E) = ln Gamma(E + 1) + sum ln (b_j)_E - sum ln (a_i)_E.
inline LogSigned rho_continuous(const StructureFn& sf, double E) {
  if (!(E >= 0.0)) throw domain_error("rho_continuous: E must be non-negative");
  double acc = log_gamma(E + 1.0);
  for (double b : sf.params().b) acc += pochhammer(b, E).log_abs;
  for (double a : sf.params().a) acc -= pochhammer(a, E).log_abs;
  return {acc, 1};
}

/// value = mantissa * exp(log_scale); error is absolute on the mantissa scale.
struct ScaledResult {
  complex mantissa;
  double log_scale = 0.0;
  double error = 0.0;

  complex value() const { return mantissa * std::exp(log_scale); }
  double abs_error() const { return error * std::exp(log_scale); }
  double rel_error() const {
    double m = std::abs(mantissa);
    return m > 0.0 ? error / m : error;
  }
  /// Principal ln of the value; -inf real part for an exact zero.
  complex log_value() const {
    if (mantissa == complex{}) return {-std::numeric_limits<double>::infinity(), 0.0};
    return principal_log(mantissa) + log_scale;
  }
};

namespace detail {

/// int_0^inf dE w^(shift + E) * weight(E), weight given as a LogSigned.
template <class Weight>
ScaledResult nu_kernel(Weight&& weight, complex w, double shift, const QuadSpec& spec) {
  spec.validate();
  if (w == complex{}) {
    if (shift < 0.0) throw domain_error("nu: zero argument with negative order");
    return {};
  }
  const double log_mod = std::log(std::abs(w));
  const double phase = principal_arg(w);
  auto log_abs = [&](double E) { return (shift + E) * log_mod + weight(E).log_abs; };
  IntegrandProbe probe = locate_peak(log_abs, std::abs(w));
  const double scale = probe.peak_log_value;
  auto integrand = [&](double E) -> complex {
    LogSigned wt = weight(E);
    double x = shift + E;
    double mag = std::exp(x * log_mod + wt.log_abs - scale);
    if (phase == 0.0) return {wt.sign * mag, 0.0};
    return std::polar(wt.sign * mag, x * phase);
  };
  QuadResult r = integrate_semi_infinite(integrand, probe, spec);
  return {r.value, scale, r.error};
}

inline void check_family(const StructureFn& sf, complex w) {
  switch (convergence_domain(sf)) {
    case ConvergenceDomain::entire: return;
    case ConvergenceDomain::unit_disc:
      if (std::abs(w) >= 1.0)
        throw domain_error("argument outside the unit disc of convergence (p = q + 1)");
      return;
    case ConvergenceDomain::divergent:
      throw divergent_family("family with p > q + 1 diverges for every nonzero argument");
  }
}

}  // namespace detail

inline ScaledResult nu_scaled(complex w, const QuadSpec& spec = {}) {
  return detail::nu_kernel([](double E) { return LogSigned{-log_gamma(E + 1.0), 1}; }, w, 0.0, spec);
}

/// Volterra's nu(w). Overflows to inf past w ~ 709; use nu_scaled there.
inline complex nu(complex w, const QuadSpec& spec = {}) { return nu_scaled(w, spec).value(); }

inline ScaledResult nu_alpha_scaled(double w, double alpha, const QuadSpec& spec = {}) {
  if (!(w > 0.0)) throw domain_error("nu_alpha: argument must be positive");
  return detail::nu_kernel(
      [alpha](double E) { return log_reciprocal_gamma(alpha + E + 1.0); }, complex{w, 0.0}, alpha, spec);
}

/// nu(w, alpha) for w > 0 and any real alpha.
inline double nu_alpha(double w, double alpha, const QuadSpec& spec = {}) {
  return nu_alpha_scaled(w, alpha, spec).value().real();
}

/// nu with an arbitrary structure function given by its logarithm.
template <class LogRho>
ScaledResult nu_from_log_rho(LogRho&& log_rho, complex w, const QuadSpec& spec = {}) {
  return detail::nu_kernel([&](double E) { return LogSigned{-log_rho(E), 1}; }, w, 0.0, spec);
}

inline ScaledResult nu_general_scaled(const StructureFn& sf, complex w, const QuadSpec& spec = {}) {
  detail::check_family(sf, w);
  if (sf.p() == 0 && sf.q() == 0) return nu_scaled(w, spec);
  return detail::nu_kernel(
      [&sf](double E) {
        LogSigned rho = rho_continuous(sf, E);
        return LogSigned{-rho.log_abs, rho.sign};
      },
      w, 0.0, spec);
}

/// The generalized nu_{p,q}(w). Entire families accept any w; p = q + 1
/// needs |w| < 1; p > q + 1 throws divergent_family.
inline complex nu_general(const StructureFn& sf, complex w, const QuadSpec& spec = {}) {
  return nu_general_scaled(sf, w, spec).value();
}

struct SeriesResult {
  complex value;
  double last_term = 0.0;  // modulus of the last term added
  std::size_t terms = 0;
};

inline constexpr std::size_t kSeriesTermCap = 10000;
inline constexpr double kSeriesCutoff = 1e-16;

inline SeriesResult pfq_series_detailed(const HyperParams& params, complex w) {
  params.validate();
  detail::check_family(StructureFn(params), w);
  complex term{1.0, 0.0};
  complex sum = term;
  for (std::size_t n = 0; n < kSeriesTermCap; ++n) {
    double nd = static_cast<double>(n);
    double ratio = 1.0 / (nd + 1.0);
    for (double a : params.a) ratio *= a + nd;
    for (double b : params.b) ratio /= b + nd;
    term *= w * ratio;
    sum += term;
    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
      throw non_finite("pfq_series: partial sum overflowed");
    if (std::abs(term) < kSeriesCutoff * std::abs(sum)) return {sum, std::abs(term), n + 2};
  }
  throw no_convergence("pfq_series: no convergence within " + std::to_string(kSeriesTermCap) + " terms");
}

/// pFq({a}; {b}; w) = sum_n w^n / rho_{p,q}(n).
inline complex pfq_series(const HyperParams& params, complex w) { return pfq_series_detailed(params, w).value; }

/// ln pFq(w) for real w >= 0, summed in log space so it survives past the
/// double-precision overflow of the linear series.
inline double pfq_series_log(const HyperParams& params, double w) {
  params.validate();
  if (!(w >= 0.0)) throw domain_error("pfq_series_log: argument must be non-negative");
  StructureFn sf(params);
  detail::check_family(sf, w);
  if (w == 0.0) return 0.0;
  const double log_w = std::log(w);
  double log_max = 0.0;
  std::vector<double> logs;
  for (std::size_t n = 0; n < kSeriesTermCap; ++n) {
    double lt = static_cast<double>(n) * log_w - rho_discrete(sf, n).log_abs;
    logs.push_back(lt);
    log_max = std::max(log_max, lt);
    if (n > 0 && lt < logs[n - 1] && lt < log_max + std::log(kSeriesCutoff)) {
      double acc = 0.0;
      for (double x : logs) acc += std::exp(x - log_max);
      return log_max + std::log(acc);
    }
  }
  throw no_convergence("pfq_series_log: no convergence within " + std::to_string(kSeriesTermCap) + " terms");
}

}  // namespace nufn
