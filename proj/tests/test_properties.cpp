#include <gtest/gtest.h>

#include <cmath>

#include "nufn/coherent.hpp"
#include "nufn/doot.hpp"
#include "nufn/quadrature.hpp"
#include "oracles.hpp"
#include "property_gens.hpp"

using nufn::complex;

TEST(Properties, CauchySchwarzOverlapBound) {
  auto g = oracle::rng(11);
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    auto sf = gen::entire_family(g);
    complex z = oracle::disc_point(g, 0.05, 3.0);
    complex z2 = oracle::disc_point(g, 0.05, 3.0);
    double m = std::abs(nufn::overlap_continuous(sf, z, z2));
    if (!(m <= 1.0 + 1e-10)) {
      ++failures;
      ADD_FAILURE() << "|<z|z2>| = " << m << " at z = " << z << ", z2 = " << z2;
    }
  }
  EXPECT_EQ(failures, 0);
}

TEST(Properties, DootEigenvalueSoundness) {
  auto g = oracle::rng(12);
  auto sf = nufn::StructureFn::gamma();
  for (int i = 0; i < 100; ++i) {
    auto poly = gen::polynomial(g, 6);
    auto expr = gen::as_expression(poly, g);
    complex z = oracle::disc_point(g, 0.0, 2.0);
    complex got = nufn::doot::scalarize({z, z, expr}, sf);
    auto [ref, scale] = gen::evaluate(poly, z);
    EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-12 * std::max(1.0, scale)) << expr.to_string();
  }
}

TEST(Properties, NormalOrderIdempotent) {
  auto g = oracle::rng(13);
  for (int i = 0; i < 100; ++i) {
    using nufn::doot::Expr;
    auto inner = gen::as_expression(gen::polynomial(g, 4), g);
    Expr e = Expr::nu(nufn::StructureFn::gamma(), Expr::exp(inner.child()) * Expr::exp(Expr::lower())) *
             Expr::power(inner, 2.0);
    Expr once = nufn::doot::normal_order(e);
    EXPECT_EQ(nufn::doot::normal_order(once), once) << once.to_string();
  }
}

TEST(Properties, GammaReproduction) {
  auto g = oracle::rng(14);
  std::vector<double> ks{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  for (int i = 0; i < 20; ++i) ks.push_back(oracle::uniform(g, 0.0, 10.0));
  for (double k : ks) {
    auto log_f = [k](double t) { return k == 0.0 ? -t : k * std::log(t) - t; };
    auto probe = nufn::locate_peak(log_f, 1.0);
    auto f = [&](double t) { return complex{std::exp(log_f(t) - probe.peak_log_value), 0.0}; };
    double v = nufn::integrate_semi_infinite(f, probe, nufn::QuadSpec{}).value.real() * std::exp(probe.peak_log_value);
    double ref = std::tgamma(k + 1.0);
    EXPECT_NEAR(v, ref, 1e-10 * ref) << k;
  }
}

TEST(Properties, DisplacementConstantInZ) {
  auto g = oracle::rng(15);
  for (int i = 0; i < 10; ++i) {
    auto sf = gen::entire_family(g);
    complex ref = nufn::nu_general(sf, 1.0);
    complex z = oracle::disc_point(g, 0.0, 2.0);
    EXPECT_NEAR(std::abs(nufn::doot::displacement_expectation(sf, z) - ref), 0.0, 1e-12 * std::abs(ref));
  }
}

TEST(Properties, PfqSeriesMatchesIntegralRatioSign) {
  // Series and integral normalizers are both positive and finite on entire families.
  auto g = oracle::rng(16);
  for (int i = 0; i < 30; ++i) {
    auto sf = gen::entire_family(g);
    double w = oracle::uniform(g, 0.0, 20.0);
    auto r = nufn::dc_limit_check(sf, w);
    EXPECT_GT(r.series, 0.0);
    EXPECT_GE(r.integral, 0.0);
    EXPECT_TRUE(std::isfinite(r.ratio));
  }
}
