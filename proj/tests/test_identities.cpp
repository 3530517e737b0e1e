#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "nufn/identities.hpp"
#include "oracles.hpp"

using nufn::complex;
using nufn::StructureFn;
using namespace nufn::identities;

TEST(LaplaceNu, ClosedFormArithmetic) {
  auto r2 = check_laplace_nu(2.0);
  EXPECT_DOUBLE_EQ(r2.rhs.real(), 1.0 / (2.0 * std::numbers::ln2));
  auto re = check_laplace_nu(std::numbers::e);
  EXPECT_NEAR(re.rhs.real(), 1.0 / std::numbers::e, 1e-16);
  auto r5 = check_laplace_nu(5.0);
  EXPECT_TRUE(r5.pass);
  EXPECT_LT(r5.rel_err, 1e-6);
  EXPECT_THROW(check_laplace_nu(1.0), nufn::domain_error);
  EXPECT_THROW(check_laplace_nu(0.5), nufn::domain_error);
}

TEST(WeightedNu, GammaFamily) {
  auto re = check_weighted_nu_integral(StructureFn::gamma(), std::numbers::e);
  EXPECT_NEAR(re.rhs.real(), 1.0, 1e-15);
  EXPECT_TRUE(re.pass);
  auto r2 = check_weighted_nu_integral(StructureFn::gamma(), 2.0);
  EXPECT_NEAR(r2.rhs.real(), 1.0 / std::numbers::ln2, 1e-15);
  EXPECT_TRUE(r2.pass);
}

TEST(WeightedNu, SubstitutionMatchesLaplace) {
  // t' = t/s turns int dt nu(t/s) e^{-t} into s int dt' nu(t') e^{-st'}.
  for (double s : {2.0, 5.0}) {
    double weighted = check_weighted_nu_integral(StructureFn::gamma(), s).lhs.real();
    double laplace = check_laplace_nu(s).lhs.real();
    EXPECT_NEAR(weighted, s * laplace, 1e-6 * weighted) << s;
  }
}

TEST(WeightedNu, UnsupportedFamilies) {
  EXPECT_THROW(check_weighted_nu_integral(StructureFn({}, {2.0}), 2.0), nufn::unsupported_family);
  EXPECT_THROW(check_weighted_nu_integral(StructureFn({2.0}, {2.0}), 2.0), nufn::unsupported_family);
  EXPECT_THROW(check_alpha_weighted(StructureFn({1.0, 1.0}, {2.0, 3.0}), 2.0, 0.0), nufn::unsupported_family);
  EXPECT_THROW(check_weighted_nu_integral(StructureFn::gamma(), 0.5), nufn::domain_error);
}

TEST(RhoNormalization, ReportsBothForms) {
  auto r = check_rho_normalization(2.0, 2.0);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.rhs.real(), 2.0 / std::numbers::ln2, 1e-14);
  EXPECT_NE(r.description.find("normalized rho satisfies it, the unnormalized one does not"), std::string::npos);
  auto one = check_rho_normalization(1.0, std::numbers::e);
  EXPECT_NEAR(one.rhs.real(), 1.0, 1e-15);
  EXPECT_NE(one.description.find("both normalizations"), std::string::npos);
}

TEST(RhoNormalization, ZeroShiftIsGammaFamily) {
  auto r = check_rho_normalization(0.0, 3.0);
  auto g = check_weighted_nu_integral(StructureFn::gamma(), 3.0);
  EXPECT_NEAR(r.lhs.real(), g.lhs.real(), 1e-10 * g.lhs.real());
  EXPECT_THROW(check_rho_normalization(-1.0, 3.0), nufn::domain_error);
}

TEST(AlphaWeighted, ZeroOrderMatchesWeightedNu) {
  for (double C : {2.0, 10.0}) {
    auto a = check_alpha_weighted(StructureFn::gamma(), C, 0.0);
    auto w = check_weighted_nu_integral(StructureFn::gamma(), C);
    EXPECT_NEAR(a.lhs.real(), w.lhs.real(), 1e-10 * w.lhs.real());
    EXPECT_NEAR(a.rhs.real(), 1.0 / std::log(C), 1e-9 / std::log(C));
  }
}

TEST(AlphaWeighted, ShiftedOrders) {
  auto r = check_alpha_weighted(StructureFn::gamma(), 2.0, 1.0);
  EXPECT_TRUE(r.pass) << r.rel_err;
  EXPECT_NEAR(r.rhs.real(), 0.5 / std::numbers::ln2, 1e-9);
  auto s = check_alpha_weighted(StructureFn({1.0}, {2.0}), 3.0, 0.5);
  EXPECT_TRUE(s.pass) << s.rel_err;
  EXPECT_THROW(check_alpha_weighted(StructureFn::gamma(), 2.0, -1.0), nufn::domain_error);
}

TEST(ComplexGaussian, DegenerateArgument) {
  auto r = check_complex_gaussian(0.0, 0.5);
  EXPECT_EQ(r.lhs, complex{});
  EXPECT_EQ(r.rhs, complex{});
  EXPECT_TRUE(r.pass);
  EXPECT_THROW(check_complex_gaussian(1.5, 0.5), nufn::domain_error);
}

TEST(ComplexGaussian, PolarQuadratureConvergesToSincKernelValue) {
  // The plane integral itself converges (slowly in the angle, because
  // nu(xz) jumps across the branch cut) to a value well away from nu(xy).
  nufn::QuadSpec spec;
  spec.rel_tol = 1e-7;
  spec.angular_points = 512;
  auto r = check_complex_gaussian(0.5, 0.5, spec);
  EXPECT_NEAR(r.lhs.real(), oracle::kGaussianLhs_05_05, 2e-3 * oracle::kGaussianLhs_05_05);
  EXPECT_NEAR(r.rhs.real(), oracle::kNuQuarter, 1e-10);
  EXPECT_FALSE(r.pass);
}

TEST(Derivative, FirstAndSecond) {
  for (double z : {0.7, 1.5}) {
    auto r1 = check_derivative_relation(z, 1);
    EXPECT_TRUE(r1.pass) << z << " " << r1.rel_err;
    EXPECT_EQ(r1.tol, 1e-5);
    auto r2 = check_derivative_relation(z, 2);
    EXPECT_TRUE(r2.pass) << z << " " << r2.rel_err;
    EXPECT_EQ(r2.tol, 1e-4);
  }
  EXPECT_TRUE(check_derivative_relation(1.0, 2).pass);
  EXPECT_THROW(check_derivative_relation(1.0, 3), nufn::domain_error);
  EXPECT_THROW(check_derivative_relation(-1.0, 1), nufn::domain_error);
}

TEST(MeijerLaplaceSeries, FormalDiagnostic) {
  auto r0 = check_meijer_laplace_series(0.3, 0);
  EXPECT_EQ(r0.status, Status::formal);
  EXPECT_NEAR(r0.rhs.real(), nufn::nu(std::exp(-0.3)).real(), 1e-14);
  auto big = check_meijer_laplace_series(1.5, 20);
  EXPECT_NE(big.description.find("diverges"), std::string::npos);
  EXPECT_NE(big.description.find("partial sums"), std::string::npos);
  EXPECT_FALSE(big.pass);
  EXPECT_TRUE(all_exact_pass({big}));
}

TEST(Grade, RelativeAndAbsolute) {
  auto r = make_report("x", "", 1.0 + 1e-7, 1.0, 1e-6);
  EXPECT_TRUE(r.pass);
  r = make_report("x", "", 1.0 + 1e-5, 1.0, 1e-6);
  EXPECT_FALSE(r.pass);
  r = make_report("x", "", 1e-8, 1e-14, 1e-6);
  EXPECT_TRUE(r.pass);  // |rhs| < 1e-12 switches to the absolute error
  r = make_report("x", "", NAN, 1.0, 1.0);
  EXPECT_FALSE(r.pass);
}

TEST(Suite, RegistryShape) {
  auto cases = registry();
  EXPECT_GE(cases.size(), 7u);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_TRUE(ids.insert(cases[i].id).second) << cases[i].id;
    if (i) {
      EXPECT_LT(cases[i - 1].id, cases[i].id);
    }
  }
}

TEST(Suite, FilterSelectsSingleCase) {
  SuiteOptions opts;
  opts.filter = "laplace_nu/s=2";
  opts.record_runtime = false;
  auto reports = run_suite(opts);
  ASSERT_EQ(reports.size(), 2u);  // s=2 and s=2.718281828
  opts.filter = "laplace_nu/s=5";
  reports = run_suite(opts);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].id, "laplace_nu/s=5");
  EXPECT_TRUE(reports[0].pass);
  EXPECT_EQ(reports[0].runtime_ms, 0.0);
}

TEST(Suite, IdsMatchReports) {
  SuiteOptions opts;
  opts.filter = "derivative";
  for (const auto& r : run_suite(opts)) {
    EXPECT_EQ(r.id.rfind("derivative/", 0), 0u);
    EXPECT_TRUE(r.pass) << r.id;
    EXPECT_GE(r.runtime_ms, 0.0);
  }
}

TEST(Suite, ToleranceOverride) {
  SuiteOptions opts;
  opts.filter = "derivative/n=2,z=1.5";
  opts.tol_override = 1e-12;
  auto reports = run_suite(opts);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].tol, 1e-12);
  EXPECT_FALSE(reports[0].pass);
  EXPECT_FALSE(all_exact_pass(reports));
}

TEST(Suite, TighterQuadratureKeepsPassingCases) {
  nufn::QuadSpec tight = nufn::QuadSpec{}.tightened(10.0);
  for (const char* filter : {"laplace_nu", "weighted_nu", "rho_normalization", "alpha_weighted", "derivative"}) {
    SuiteOptions opts;
    opts.filter = filter;
    for (const auto& r : run_suite(opts, tight)) EXPECT_TRUE(r.pass) << r.id << " rel_err " << r.rel_err;
  }
}

TEST(Suite, FailedEvaluationBecomesReport) {
  // A quadrature budget too small for any case turns every report into a failure, not an abort.
  nufn::QuadSpec starved;
  starved.max_panels = 4;
  starved.rel_tol = 1e-15;
  SuiteOptions opts;
  opts.filter = "laplace_nu/s=5";
  auto reports = run_suite(opts, starved);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_FALSE(reports[0].pass);
  EXPECT_NE(reports[0].description.find("evaluation failed"), std::string::npos);
}
