#pragma once

/// Closed-form integral identities of the nu-function family, each evaluated
/// numerically on both sides and compared at a registered tolerance.
///
/// Elementary weight families (the only ones whose Meijer-G weight reduces
/// to a closed form here):
///   (p, q) = (0, 0)                 weight e^{-t}
///   (p, q) = (1, 1), a = 1, b = beta weight e^{-t} t^{beta - 1}
/// Both satisfy  int_0^inf dt t^E weight(t) = [prod Gamma(b) / prod Gamma(a)] rho(E)
/// with rho in the Pochhammer normalization used by StructureFn.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nufn/error.hpp"
#include "nufn/format.hpp"
#include "nufn/nu.hpp"
#include "nufn/quadrature.hpp"
#include "nufn/special.hpp"

namespace nufn::identities {

enum class Status { exact, formal };

inline const char* to_string(Status s) { return s == Status::exact ? "exact" : "formal"; }

struct IdentityReport {
  std::string id;
  std::string description;
  complex lhs;
  complex rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  Status status = Status::exact;
  double runtime_ms = 0.0;
};

/// Fills the error fields and the verdict: relative error against tol, or
/// absolute error when |rhs| < 1e-12.
inline void grade(IdentityReport& r) {
  r.abs_err = std::abs(r.lhs - r.rhs);
  double scale = std::abs(r.rhs);
  r.rel_err = scale > 0.0 ? r.abs_err / scale : r.abs_err;
  bool tiny = scale < 1e-12;
  r.pass = std::isfinite(r.abs_err) && (tiny ? r.abs_err <= r.tol : r.rel_err <= r.tol);
}

inline IdentityReport make_report(std::string id, std::string description, complex lhs, complex rhs, double tol,
                                  Status status = Status::exact) {
  IdentityReport r;
  r.id = std::move(id);
  r.description = std::move(description);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.status = status;
  grade(r);
  return r;
}

namespace detail {

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// int_0^inf f(t) dt for a positive integrand given by its logarithm.
template <class LogF>
ScaledResult integrate_positive(LogF&& log_f, double hint, const QuadSpec& spec) {
  auto safe = [&](double t) {
    double v = log_f(t);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  IntegrandProbe probe = locate_peak(safe, hint);
  auto f = [&](double t) { return complex{std::exp(safe(t) - probe.peak_log_value), 0.0}; };
  QuadResult r = integrate_semi_infinite(f, probe, spec);
  return {r.value, probe.peak_log_value, r.error};
}

inline std::string num(complex z) {
  if (z.imag() == 0.0) return num(z.real());
  std::string im = num(z.imag());
  return num(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

inline double log_nu_real(const ScaledResult& r) { return r.log_value().real(); }

enum class WeightFamily { gamma, shifted_gamma };

/// Which elementary weight applies to `sf`; throws unsupported_family otherwise.
inline WeightFamily weight_family(const StructureFn& sf) {
  if (sf.p() == 0 && sf.q() == 0) return WeightFamily::gamma;
  if (sf.p() == 1 && sf.q() == 1 && sf.params().a[0] == 1.0) return WeightFamily::shifted_gamma;
  throw unsupported_family(
      "only (p,q) = (0,0) and (1,1) with a = [1] have an elementary weight; general Meijer-G weights are "
      "not supported");
}

/// ln of the weight e^{-t} t^{beta - 1} (beta = 1 for the (0,0) family).
inline double log_weight(const StructureFn& sf, double t) {
  if (weight_family(sf) == WeightFamily::gamma) return -t;
  double beta = sf.params().b[0];
  if (beta == 1.0) return -t;
  return -t + (beta - 1.0) * std::log(t);
}

/// prod Gamma(b) / prod Gamma(a).
inline double gamma_ratio(const StructureFn& sf, double shift = 0.0) {
  double acc = 0.0;
  for (double b : sf.params().b) acc += log_gamma(b + shift);
  for (double a : sf.params().a) acc -= log_gamma(a + shift);
  return std::exp(acc);
}

inline std::string family_label(const StructureFn& sf) {
  const auto& hp = sf.params();
  std::string out = "p=" + std::to_string(hp.p()) + ",q=" + std::to_string(hp.q());
  if (!hp.a.empty() || !hp.b.empty()) {
    out += ",a=[";
    for (std::size_t i = 0; i < hp.a.size(); ++i) out += (i ? " " : "") + num(hp.a[i]);
    out += "],b=[";
    for (std::size_t i = 0; i < hp.b.size(); ++i) out += (i ? " " : "") + num(hp.b[i]);
    out += "]";
  }
  return out;
}

}  // namespace detail

/// int_0^inf dt e^{-st} nu(t) = 1 / (s ln s), s > 1. The left side is a
/// t-integral over nu(t) values, each itself an E-integral.
inline IdentityReport check_laplace_nu(double s, const QuadSpec& spec = {}) {
  if (!(s > 1.0)) throw domain_error("check_laplace_nu: s must exceed 1 (the closed form is negative for s < 1)");
  auto log_f = [&](double t) { return -s * t + detail::log_nu_real(nu_scaled(t, spec)); };
  ScaledResult lhs = detail::integrate_positive(log_f, 1.0 / (s - 1.0), spec);
  double rhs = 1.0 / (s * std::log(s));
  return make_report("laplace_nu/s=" + detail::num(s),
                     "int_0^inf dt e^{-st} nu(t) = 1/(s ln s) at s = " + detail::num(s), lhs.value(), rhs, 1e-6);
}

/// int_0^inf dt nu_{p,q}(t/x) weight(t) = [prod Gamma(b)/prod Gamma(a)] / ln x.
inline IdentityReport check_weighted_nu_integral(const StructureFn& sf, double x, const QuadSpec& spec = {}) {
  detail::weight_family(sf);
  if (!(x > 1.0)) throw domain_error("check_weighted_nu_integral: x must exceed 1");
  auto log_f = [&](double t) {
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return detail::log_weight(sf, t) + detail::log_nu_real(nu_general_scaled(sf, t / x, spec));
  };
  ScaledResult lhs = detail::integrate_positive(log_f, 1.0, spec);
  double rhs = detail::gamma_ratio(sf) / std::log(x);
  return make_report("weighted_nu/" + detail::family_label(sf) + ",x=" + detail::num(x),
                     "int_0^inf dt nu_{p,q}(t/x) G(t) = [prod Gamma(b)/prod Gamma(a)]/ln x with elementary weight G, " +
                         detail::family_label(sf) + ", x = " + detail::num(x),
                     lhs.value(), rhs, 1e-6);
}

/// int_0^inf dt nu_{1,1}(t/x) e^{-t} t^b = Gamma(b+1) / ln x for the family
/// a = [1], b = [b + 1]. The primary left side uses
/// rho(E) = Gamma(E+1)(b+1)_E/(1)_E = Gamma(b+1+E)/Gamma(b+1); the
/// unnormalized rho(E) = Gamma(b+1+E) is evaluated as well and reported.
inline IdentityReport check_rho_normalization(double b, double x, const QuadSpec& spec = {}) {
  if (!(b > -1.0)) throw domain_error("check_rho_normalization: b must exceed -1");
  if (!(x > 1.0)) throw domain_error("check_rho_normalization: x must exceed 1");
  StructureFn sf({1.0}, {b + 1.0});
  IdentityReport r = check_weighted_nu_integral(sf, x, spec);

  auto log_rho_raw = [b](double E) { return log_gamma(b + 1.0 + E); };
  auto log_f = [&](double t) {
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return -t + b * std::log(t) + detail::log_nu_real(nu_from_log_rho(log_rho_raw, t / x, spec));
  };
  double raw = detail::integrate_positive(log_f, 1.0, spec).value().real();
  double target = r.rhs.real();
  double normalized = r.lhs.real();
  auto close = [&](double v) { return std::abs(v - target) <= 1e-6 * std::abs(target); };
  std::string verdict = close(normalized) && close(raw)  ? "both normalizations satisfy it (Gamma(b+1) = 1)"
                        : close(normalized)              ? "the normalized rho satisfies it, the unnormalized one does not"
                        : close(raw)                     ? "the unnormalized rho satisfies it, the normalized one does not"
                                                         : "neither normalization satisfies it";
  r.id = "rho_normalization/b=" + detail::num(b) + ",x=" + detail::num(x);
  r.description = "int_0^inf dt nu_{1,1}(t/x) e^{-t} t^b = Gamma(b+1)/ln x at b = " + detail::num(b) +
                  ", x = " + detail::num(x) + "; lhs with rho = Gamma(b+1+E)/Gamma(b+1): " +
                  format_number(normalized) + "; lhs with rho = Gamma(b+1+E): " + format_number(raw) +
                  "; 1/ln x = " + format_number(1.0 / std::log(x)) + "; " + verdict;
  return r;
}

/// int_0^inf dt nu(t/C, alpha) weight(t)
///   = C^{-alpha} [prod Gamma(b+alpha)/prod Gamma(a+alpha)] nu_{q+1,p}'(1/C),
/// where the last factor is taken as
///   int_0^inf dE (1)_E prod (b+alpha)_E / prod (a+alpha)_E C^{-E} / Gamma(E+1),
/// i.e. nu_general of the family a' = {1, b_j + alpha}, b' = {a_i + alpha}.
inline IdentityReport check_alpha_weighted(const StructureFn& sf, double C, double alpha, const QuadSpec& spec = {}) {
  detail::weight_family(sf);
  if (!(C > 1.0)) throw domain_error("check_alpha_weighted: C must exceed 1");
  if (!(alpha > -1.0)) throw domain_error("check_alpha_weighted: alpha must exceed -1");
  for (double a : sf.params().a)
    if (!(a + alpha > 0.0)) throw domain_error("check_alpha_weighted: a + alpha must be positive");
  for (double b : sf.params().b)
    if (!(b + alpha > 0.0)) throw domain_error("check_alpha_weighted: b + alpha must be positive");

  auto log_f = [&](double t) {
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return detail::log_weight(sf, t) + detail::log_nu_real(nu_alpha_scaled(t / C, alpha, spec));
  };
  ScaledResult lhs = detail::integrate_positive(log_f, 1.0, spec);

  std::vector<double> a2{1.0};
  for (double b : sf.params().b) a2.push_back(b + alpha);
  std::vector<double> b2;
  for (double a : sf.params().a) b2.push_back(a + alpha);
  StructureFn shifted(std::move(a2), std::move(b2));
  complex rhs = std::pow(C, -alpha) * detail::gamma_ratio(sf, alpha) * nu_general(shifted, 1.0 / C, spec);

  return make_report("alpha_weighted/" + detail::family_label(sf) + ",C=" + detail::num(C) +
                         ",alpha=" + detail::num(alpha),
                     "int_0^inf dt nu(t/C, alpha) G(t) = C^{-alpha} [prod Gamma(b+alpha)/prod Gamma(a+alpha)] "
                     "nu'(1/C) with elementary weight G, " +
                         detail::family_label(sf) + ", C = " + detail::num(C) + ", alpha = " + detail::num(alpha) +
                         "; nu' is read as int dE (1)_E prod(b+alpha)_E/prod(a+alpha)_E C^{-E}/Gamma(E+1), "
                         "which fixes the otherwise ambiguous index convention of the closed form",
                     lhs.value(), rhs, 1e-6);
}

/// int d^2z/pi e^{-|z|^2} nu(x z) nu(y conj(z)) against nu(x y), with the
/// plane integral done in polar form and nu on its principal branch.
inline IdentityReport check_complex_gaussian(complex x, complex y, const QuadSpec& spec = {}) {
  if (std::abs(x) > 1.0 || std::abs(y) > 1.0)
    throw domain_error("check_complex_gaussian: |x| and |y| must not exceed 1");
  complex lhs{};
  if (x != complex{} && y != complex{}) {
    auto g = [&](double t, double phi) {
      complex z = std::polar(std::sqrt(t), phi);
      return std::exp(-t) * nu(x * z, spec) * nu(y * std::conj(z), spec);
    };
    lhs = integrate_polar_2d(g, spec).value;
  }
  complex rhs = nu(x * y, spec);
  return make_report("complex_gaussian/x=" + detail::num(x) + ",y=" + detail::num(y),
                     "int d^2z/pi e^{-|z|^2} nu(xz) nu(y conj z) = nu(xy) at x = " + detail::num(x) +
                         ", y = " + detail::num(y),
                     lhs, rhs, 1e-4);
}

/// d^n/dz^n nu(z) = nu(z, -n) for n in {1, 2}, by central differences with
/// h = 1e-4 (n = 1, tol 1e-5) or h = 1e-3 (n = 2, tol 1e-4).
inline IdentityReport check_derivative_relation(double z, int n, const QuadSpec& spec = {}) {
  if (!(z > 0.0)) throw domain_error("check_derivative_relation: z must be positive");
  if (n != 1 && n != 2) throw domain_error("check_derivative_relation: n must be 1 or 2");
  QuadSpec inner = spec;
  inner.rel_tol = std::min(spec.rel_tol, 1e-13);
  double h = n == 1 ? 1e-4 : 1e-3;
  if (z - h <= 0.0) throw domain_error("check_derivative_relation: z too close to 0 for the difference step");
  double fp = nu(z + h, inner).real();
  double fm = nu(z - h, inner).real();
  double diff = n == 1 ? (fp - fm) / (2.0 * h) : (fp - 2.0 * nu(z, inner).real() + fm) / (h * h);
  double rhs = nu_alpha(z, -static_cast<double>(n), inner);
  return make_report("derivative/n=" + std::to_string(n) + ",z=" + detail::num(z),
                     "d^n/dz^n nu(z) = nu(z, -n) by central difference with h = " + detail::num(h) +
                         " at z = " + detail::num(z) + ", n = " + std::to_string(n),
                     diff, rhs, n == 1 ? 1e-5 : 1e-4);
}

/// Diagnostic for the term-by-term expansion
///   int_0^inf dt e^{-t} nu(e^{-st}) ~ sum_l rho(l) (-1)^l/l! s^l d^l/ds^l nu(e^{-s})
/// for p = q = 0, where the l-th term is s^l int dE E^l e^{-sE}/Gamma(E+1).
/// The expansion of e^{-sEt} is integrated past its radius of usefulness
/// (sE > 1 on most of the E-range for large l), so the series is asymptotic
/// at best; the report lists the partial sums and never fails the suite.
inline IdentityReport check_meijer_laplace_series(double s, int L, const QuadSpec& spec = {}) {
  if (!(s > 0.0)) throw domain_error("check_meijer_laplace_series: s must be positive");
  if (L < 0) throw domain_error("check_meijer_laplace_series: L must be non-negative");
  auto log_f = [&](double t) { return -t + detail::log_nu_real(nu_scaled(std::exp(-s * t), spec)); };
  double lhs = detail::integrate_positive(log_f, 1.0, spec).value().real();

  std::vector<double> partial;
  std::vector<double> terms;
  double sum = 0.0;
  for (int l = 0; l <= L; ++l) {
    double term;
    if (l == 0) {
      term = nu(std::exp(-s), spec).real();
    } else {
      auto weight = [l](double E) {
        if (E == 0.0) return LogSigned{-std::numeric_limits<double>::infinity(), 1};
        return LogSigned{l * std::log(E) - log_gamma(E + 1.0), 1};
      };
      ScaledResult moment = nufn::detail::nu_kernel(weight, complex{std::exp(-s), 0.0}, 0.0, spec);
      term = std::exp(l * std::log(s) + moment.log_value().real());
    }
    terms.push_back(term);
    sum += term;
    partial.push_back(sum);
  }

  std::string trajectory;
  for (std::size_t l = 0; l < partial.size(); ++l)
    trajectory += (l ? " " : "") + std::to_string(l) + ":" + detail::num(partial[l]);
  std::size_t smallest = static_cast<std::size_t>(std::min_element(terms.begin(), terms.end()) - terms.begin());
  bool growing = terms.size() > 1 && terms.back() > terms[terms.size() - 2];
  std::string tail = growing ? "terms grow at l = " + std::to_string(L) +
                                   ": the series diverges (the exp(-sEt) expansion is used where sE > 1)"
                             : "terms still decreasing at l = " + std::to_string(L) +
                                   "; they grow again for larger l because sE > 1 on the tail of the E-range";

  IdentityReport r = make_report(
      "meijer_laplace_series/s=" + detail::num(s) + ",L=" + std::to_string(L),
      "formal term-by-term series for int_0^inf dt e^{-t} nu(e^{-st}), s = " + detail::num(s) +
          "; lhs = " + detail::num(lhs) + "; partial sums " + trajectory + "; smallest term at l = " +
          std::to_string(smallest) + "; " + tail,
      lhs, partial.back(), 1e-6, Status::formal);
  return r;
}

/// One registered identity instance.
struct IdentityCase {
  std::string id;
  Status status = Status::exact;
  std::function<IdentityReport(const QuadSpec&)> run;
};

/// The registry, sorted by id.
inline std::vector<IdentityCase> registry() {
  using std::numbers::e;
  std::vector<IdentityCase> cases;
  auto add = [&](Status status, std::function<IdentityReport(const QuadSpec&)> run, std::string id) {
    cases.push_back({std::move(id), status, std::move(run)});
  };
  const StructureFn gamma_family = StructureFn::gamma();
  const StructureFn shifted({1.0}, {2.0});

  for (double s : {2.0, e, 5.0})
    add(Status::exact, [s](const QuadSpec& q) { return check_laplace_nu(s, q); }, "laplace_nu/s=" + detail::num(s));
  for (double x : {2.0, e, 10.0})
    add(Status::exact, [=](const QuadSpec& q) { return check_weighted_nu_integral(gamma_family, x, q); },
        "weighted_nu/" + detail::family_label(gamma_family) + ",x=" + detail::num(x));
  add(Status::exact, [=](const QuadSpec& q) { return check_weighted_nu_integral(shifted, 3.0, q); },
      "weighted_nu/" + detail::family_label(shifted) + ",x=" + detail::num(3.0));
  for (auto [b, x] : {std::pair{0.5, 3.0}, std::pair{1.0, e}, std::pair{2.0, 2.0}})
    add(Status::exact, [b = b, x = x](const QuadSpec& q) { return check_rho_normalization(b, x, q); },
        "rho_normalization/b=" + detail::num(b) + ",x=" + detail::num(x));
  for (auto [C, alpha] : {std::pair{2.0, 0.0}, std::pair{2.0, 1.0}, std::pair{e, 0.5}})
    add(Status::exact, [=](const QuadSpec& q) { return check_alpha_weighted(gamma_family, C, alpha, q); },
        "alpha_weighted/" + detail::family_label(gamma_family) + ",C=" + detail::num(C) +
            ",alpha=" + detail::num(alpha));
  add(Status::exact, [=](const QuadSpec& q) { return check_alpha_weighted(shifted, 3.0, 0.5, q); },
      "alpha_weighted/" + detail::family_label(shifted) + ",C=" + detail::num(3.0) + ",alpha=" + detail::num(0.5));
  for (auto [x, y] : {std::pair{0.3, 0.5}, std::pair{0.5, 0.5}})
    add(Status::exact, [x = x, y = y](const QuadSpec& q) { return check_complex_gaussian(x, y, q); },
        "complex_gaussian/x=" + detail::num(x) + ",y=" + detail::num(y));
  for (int n : {1, 2})
    for (double z : {0.7, 1.5})
      add(Status::exact, [=](const QuadSpec& q) { return check_derivative_relation(z, n, q); },
          "derivative/n=" + std::to_string(n) + ",z=" + detail::num(z));
  add(Status::exact, [](const QuadSpec& q) { return check_derivative_relation(1.0, 2, q); },
      "derivative/n=2,z=" + detail::num(1.0));
  for (auto [s, L] : {std::pair{0.1, 10}, std::pair{1.5, 20}})
    add(Status::formal, [s = s, L = L](const QuadSpec& q) { return check_meijer_laplace_series(s, L, q); },
        "meijer_laplace_series/s=" + detail::num(s) + ",L=" + std::to_string(L));

  std::sort(cases.begin(), cases.end(), [](const IdentityCase& x, const IdentityCase& y) { return x.id < y.id; });
  return cases;
}

struct SuiteOptions {
  std::string filter;             // substring of the id; empty runs everything
  double tol_override = 0.0;      // replaces the registered tolerance when > 0
  bool record_runtime = true;     // false leaves runtime_ms at 0 for byte-stable output
};

/// Runs every registered case whose id contains the filter, in id order.
/// A case that throws yields a failing report carrying the error message.
inline std::vector<IdentityReport> run_suite(const SuiteOptions& opts = {}, const QuadSpec& spec = {}) {
  std::vector<IdentityReport> out;
  for (const auto& c : registry()) {
    if (!opts.filter.empty() && c.id.find(opts.filter) == std::string::npos) continue;
    auto start = std::chrono::steady_clock::now();
    IdentityReport r;
    try {
      r = c.run(spec);
    } catch (const std::exception& ex) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      r = IdentityReport{};
      r.description = std::string("evaluation failed: ") + ex.what();
      r.lhs = r.rhs = {nan, nan};
      r.abs_err = r.rel_err = nan;
      r.status = c.status;
    }
    r.id = c.id;
    if (opts.tol_override > 0.0) {
      r.tol = opts.tol_override;
      grade(r);
    }
    if (opts.record_runtime)
      r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

/// True when every exact report passes; formal reports are ignored.
inline bool all_exact_pass(const std::vector<IdentityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const IdentityReport& r) { return r.status == Status::formal || r.pass; });
}

}  // namespace nufn::identities
