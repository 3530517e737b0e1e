#pragma once

/// Deterministic integration over [0, inf) and over the complex plane in
/// polar form.
///
/// Error model: the integrand is assumed unimodal in log-magnitude and
/// decaying after its peak. Integration is truncated where the log-magnitude
/// has dropped 100 ln 10 below the peak, so the discarded tail is far below
/// any representable relative tolerance. The finite range is integrated by
/// globally adaptive 15-point Gauss-Legendre panels; a panel's error estimate
/// is the difference between its one-panel and two-half-panel values.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "nufn/error.hpp"
#include "nufn/special.hpp"

namespace nufn {

/// Tolerance and truncation policy for every integral in the library.
struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_floor = 1e-300;
  std::size_t max_panels = 2000;
  std::size_t angular_points = 64;

  void validate() const {
    if (!(rel_tol > 0.0)) throw domain_error("QuadSpec: rel_tol must be positive");
    if (max_panels < 4) throw domain_error("QuadSpec: max_panels must be at least 4");
    if (angular_points < 8 || angular_points % 2 != 0)
      throw domain_error("QuadSpec: angular_points must be even and at least 8");
  }

  QuadSpec tightened(double factor) const {
    QuadSpec out = *this;
    out.rel_tol = rel_tol / factor;
    return out;
  }
};

/// Where an integrand peaks and where it may be cut off.
struct IntegrandProbe {
  double peak_location = 0.0;
  double truncation_point = 1.0;
  double peak_log_value = 0.0;
};

struct QuadResult {
  complex value;
  double error = 0.0;  // absolute error estimate
  std::size_t panels = 0;
};

/// Log-magnitude drop below the peak at which integration is truncated.
inline constexpr double kTruncationDrop = 100.0 * std::numbers::ln10;
/// Largest truncation point locate_peak will search up to.
inline constexpr double kTruncationClamp = 1e6;

namespace detail {

struct GaussLegendreRule {
  std::array<double, 15> nodes{};
  std::array<double, 15> weights{};
};

inline const GaussLegendreRule& gauss_legendre_15() {
  static const GaussLegendreRule rule = [] {
    constexpr int n = 15;
    GaussLegendreRule r;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

inline double finite_or_lowest(double v) {
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

struct RuleValue {
  complex value;
  double l1 = 0.0;
};

template <class F>
RuleValue apply_rule(F& f, double a, double b) {
  const auto& rule = gauss_legendre_15();
  double half = 0.5 * (b - a);
  double mid = 0.5 * (a + b);
  RuleValue out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    complex fx = f(mid + half * rule.nodes[i]);
    if (!std::isfinite(fx.real()) || !std::isfinite(fx.imag()))
      throw non_finite("integrand returned a non-finite value at " +
                       std::to_string(mid + half * rule.nodes[i]));
    out.value += rule.weights[i] * fx;
    out.l1 += rule.weights[i] * std::abs(fx);
  }
  out.value *= half;
  out.l1 *= half;
  return out;
}

struct Panel {
  double a, b;
  complex whole, left, right;
  double l1;
  double err;
  bool splittable;
};

template <class F>
Panel make_panel(F& f, double a, double b, complex whole) {
  double m = 0.5 * (a + b);
  RuleValue l = apply_rule(f, a, m);
  RuleValue r = apply_rule(f, m, b);
  Panel p{a, b, whole, l.value, r.value, l.l1 + r.l1, 0.0, true};
  p.err = std::abs(whole - (l.value + r.value));
  p.splittable = (m > a && m < b && (b - a) > 1e-14 * (1.0 + std::abs(a)));
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Legendre over [a, b], starting from the given
/// breakpoints (sorted, inside (a, b)) split into `initial_per_segment`
/// panels each. Deterministic: panel sums are taken in order of position.
template <class F>
QuadResult integrate_interval(F&& f, double a, double b, const QuadSpec& spec,
                              const std::vector<double>& breakpoints = {},
                              std::size_t initial_per_segment = 2) {
  spec.validate();
  if (!(b > a)) return {};
  std::vector<double> edges{a};
  for (double x : breakpoints)
    if (x > edges.back() && x < b) edges.push_back(x);
  edges.push_back(b);

  std::vector<detail::Panel> panels;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    double width = (edges[s + 1] - edges[s]) / static_cast<double>(initial_per_segment);
    for (std::size_t k = 0; k < initial_per_segment; ++k) {
      double lo = edges[s] + width * k;
      double hi = (k + 1 == initial_per_segment) ? edges[s + 1] : lo + width;
      complex whole = detail::apply_rule(f, lo, hi).value;
      panels.push_back(detail::make_panel(f, lo, hi, whole));
    }
  }

  auto totals = [&] {
    complex sum;
    double err = 0.0, l1 = 0.0;
    for (const auto& p : panels) {
      sum += p.left + p.right;
      err += p.err;
      l1 += p.l1;
    }
    return std::tuple{sum, err, l1};
  };
  auto target = [&](complex sum, double l1) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    return std::max({spec.rel_tol * std::abs(sum), spec.abs_floor, 50.0 * eps * l1});
  };

  while (true) {
    auto [sum, err, l1] = totals();
    if (err <= target(sum, l1)) break;
    auto worst = panels.end();
    for (auto it = panels.begin(); it != panels.end(); ++it)
      if (it->splittable && (worst == panels.end() || it->err > worst->err)) worst = it;
    if (worst == panels.end() || panels.size() >= spec.max_panels)
      throw tolerance_not_met("quadrature: tolerance not met with " + std::to_string(panels.size()) +
                                  " panels",
                              sum, err);
    detail::Panel parent = *worst;
    double m = 0.5 * (parent.a + parent.b);
    *worst = detail::make_panel(f, parent.a, m, parent.left);
    panels.push_back(detail::make_panel(f, m, parent.b, parent.right));
  }

  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
  QuadResult out;
  for (const auto& p : panels) {
    out.value += p.left + p.right;
    out.error += p.err;
  }
  out.panels = panels.size();
  return out;
}

/// Brackets the maximum of a log-integrand on [0, inf) by a doubling scan and
/// refines it by golden-section search, then finds the point where the
/// log-integrand has dropped kTruncationDrop below the peak by doubling and
/// bisection. The hint sets the initial scan scale only.
template <class LogFn>
IntegrandProbe locate_peak(LogFn&& log_integrand, double hint) {
  auto f = [&](double x) { return detail::finite_or_lowest(log_integrand(x)); };

  std::vector<double> xs{0.0};
  std::vector<double> fs{f(0.0)};
  double step = std::max(std::isfinite(hint) ? hint : 0.0, 1e-2) / 16.0;
  for (double x = step;; x *= 2.0) {
    if (x > kTruncationClamp) throw non_decaying("locate_peak: integrand does not decay before the clamp");
    xs.push_back(x);
    fs.push_back(f(x));
    if (fs.back() < fs[fs.size() - 2]) break;
  }
  std::size_t best = fs.size() - 2;
  double lo = best == 0 ? 0.0 : xs[best - 1];
  double hi = xs[best + 1];

  double peak = xs[best];
  double peak_value = fs[best];
  if (std::isinf(peak_value) && peak_value < 0)
    throw non_decaying("locate_peak: integrand vanishes on the scanned grid");

  constexpr double inv_phi = 0.6180339887498948482;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-10 * std::max(1.0, std::abs(c)); ++iter) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  if (fc > peak_value) {
    peak = c;
    peak_value = fc;
  }
  if (fd > peak_value) {
    peak = d;
    peak_value = fd;
  }

  const double level = peak_value - kTruncationDrop;
  double below = peak;
  double above = std::max(2.0 * peak, peak + 1.0);
  while (f(above) > level) {
    if (above >= kTruncationClamp)
      throw non_decaying("locate_peak: integrand does not decay before the clamp");
    below = above;
    above = std::min(2.0 * above, kTruncationClamp);
  }
  for (int iter = 0; iter < 60 && (above - below) > 1e-6 * above; ++iter) {
    double mid = 0.5 * (below + above);
    if (f(mid) > level)
      below = mid;
    else
      above = mid;
  }
  return {peak, above, peak_value};
}

/// Integrates f over [0, probe.truncation_point]; the peak is used as a
/// panel breakpoint.
template <class F>
QuadResult integrate_semi_infinite(F&& f, const IntegrandProbe& probe, const QuadSpec& spec) {
  std::vector<double> breaks;
  if (probe.peak_location > 0.0) breaks.push_back(probe.peak_location);
  return integrate_interval(f, 0.0, probe.truncation_point, spec, breaks,
                            breaks.empty() ? 4 : 2);
}

/// Integral of g(t, phi) over the plane with measure d(phi)/(2 pi) dt,
/// t = |z|^2: uniform trapezoid in phi composed with the semi-infinite rule
/// in t. The truncation probe follows the angular mean of |g|.
template <class G>
QuadResult integrate_polar_2d(G&& g, const QuadSpec& spec) {
  spec.validate();
  const std::size_t m = spec.angular_points;
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(m);
  auto angular_mean = [&](double t) {
    complex acc;
    for (std::size_t k = 0; k < m; ++k) acc += g(t, dphi * static_cast<double>(k));
    return acc / static_cast<double>(m);
  };
  auto log_envelope = [&](double t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) acc += std::abs(g(t, dphi * static_cast<double>(k)));
    return std::log(acc / static_cast<double>(m));
  };
  IntegrandProbe probe = locate_peak(log_envelope, 1.0);
  return integrate_semi_infinite(angular_mean, probe, spec);
}

}  // namespace nufn
