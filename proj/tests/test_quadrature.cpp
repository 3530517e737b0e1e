#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nufn/quadrature.hpp"

using nufn::complex;
using nufn::QuadSpec;

TEST(GaussLegendre, ExactForDegree29) {
  const auto& rule = nufn::detail::gauss_legendre_15();
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-15);
  for (int k = 0; k <= 29; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], k);
    double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(acc, exact, 1e-14) << k;
  }
}

TEST(IntegrateInterval, SmoothAndSingular) {
  QuadSpec spec;
  auto sine = [](double x) { return complex{std::sin(x), 0.0}; };
  EXPECT_NEAR(nufn::integrate_interval(sine, 0.0, std::numbers::pi, spec).value.real(), 2.0, 1e-13);
  auto root = [](double x) { return complex{std::sqrt(x), 0.0}; };
  EXPECT_NEAR(nufn::integrate_interval(root, 0.0, 1.0, spec).value.real(), 2.0 / 3.0, 1e-10);
  auto osc = [](double x) { return complex{std::cos(x), std::sin(x)}; };
  complex r = nufn::integrate_interval(osc, 0.0, 10.0, spec).value;
  EXPECT_NEAR(r.real(), std::sin(10.0), 1e-12);
  EXPECT_NEAR(r.imag(), 1.0 - std::cos(10.0), 1e-12);
  EXPECT_EQ(nufn::integrate_interval(sine, 1.0, 1.0, spec).value, complex{});
}

TEST(IntegrateInterval, PanelBudgetExhaustion) {
  QuadSpec spec;
  spec.max_panels = 4;
  spec.rel_tol = 1e-15;
  auto rough = [](double x) { return complex{std::abs(std::sin(50.0 * x)), 0.0}; };
  try {
    nufn::integrate_interval(rough, 0.0, 3.0, spec);
    FAIL() << "expected tolerance_not_met";
  } catch (const nufn::tolerance_not_met& e) {
    EXPECT_GT(e.error_bound(), 0.0);
    EXPECT_TRUE(std::isfinite(e.estimate().real()));
  }
}

TEST(IntegrateInterval, NonFiniteIntegrand) {
  auto bad = [](double x) { return complex{1.0 / (x - 0.5), 0.0} * (x > 0.4 ? NAN : 1.0); };
  EXPECT_THROW(nufn::integrate_interval(bad, 0.0, 1.0, QuadSpec{}), nufn::non_finite);
}

TEST(IntegrateInterval, Deterministic) {
  auto f = [](double x) { return complex{std::exp(-x * x) * std::cos(3.0 * x), 0.0}; };
  auto a = nufn::integrate_interval(f, -4.0, 7.0, QuadSpec{});
  auto b = nufn::integrate_interval(f, -4.0, 7.0, QuadSpec{});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.panels, b.panels);
}

TEST(LocatePeak, GammaIntegrand) {
  for (int k : {0, 1, 3, 10, 40}) {
    auto log_f = [k](double t) { return k * std::log(t) - t; };
    auto probe = nufn::locate_peak(log_f, 1.0);
    EXPECT_NEAR(probe.peak_location, k, 1e-6 * (k + 1)) << k;
    EXPECT_GT(probe.truncation_point, static_cast<double>(k));
    EXPECT_LE(log_f(probe.truncation_point), probe.peak_log_value - nufn::kTruncationDrop + 1e-6);
  }
}

TEST(LocatePeak, GrowingIntegrandRejected) {
  EXPECT_THROW(nufn::locate_peak([](double t) { return t; }, 1.0), nufn::non_decaying);
  EXPECT_THROW(nufn::locate_peak([](double) { return -INFINITY; }, 1.0), nufn::non_decaying);
}

TEST(SemiInfinite, GammaReproduction) {
  double fact = 1.0;
  for (int k = 0; k <= 10; ++k) {
    if (k > 0) fact *= k;
    auto log_f = [k](double t) { return k * std::log(t) - t; };
    auto probe = nufn::locate_peak(log_f, 1.0);
    auto f = [&](double t) { return complex{std::exp(log_f(t) - probe.peak_log_value), 0.0}; };
    auto r = nufn::integrate_semi_infinite(f, probe, QuadSpec{});
    double value = r.value.real() * std::exp(probe.peak_log_value);
    EXPECT_NEAR(value, fact, 1e-10 * fact) << "k = " << k;
  }
}

TEST(Polar2d, GaussianMoments) {
  // int d^2z/pi e^{-|z|^2} |z|^2 = 1, written as dphi/(2 pi) dt with t = |z|^2
  auto g = [](double t, double) { return complex{t * std::exp(-t), 0.0}; };
  EXPECT_NEAR(nufn::integrate_polar_2d(g, QuadSpec{}).value.real(), 1.0, 1e-10);
  // z^2 e^{-|z|^2} averages to zero over the angle
  auto h = [](double t, double phi) { return std::polar(t, 2.0 * phi) * std::exp(-t) + std::exp(-t); };
  complex r = nufn::integrate_polar_2d(h, QuadSpec{}).value;
  EXPECT_NEAR(r.real(), 1.0, 1e-10);
  EXPECT_NEAR(r.imag(), 0.0, 1e-12);
}

TEST(QuadSpecTest, Validation) {
  QuadSpec s;
  s.rel_tol = 0.0;
  EXPECT_THROW(s.validate(), nufn::domain_error);
  s = QuadSpec{};
  s.angular_points = 7;
  EXPECT_THROW(s.validate(), nufn::domain_error);
  s = QuadSpec{};
  s.max_panels = 2;
  EXPECT_THROW(s.validate(), nufn::domain_error);
  EXPECT_DOUBLE_EQ(QuadSpec{}.tightened(10.0).rel_tol, 1e-11);
}
