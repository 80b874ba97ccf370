#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsgev/error.hpp"
#include "nsgev/random.hpp"
#include "nsgev/return_levels.hpp"
#include "nsgev/synthetic.hpp"
#include "support.hpp"

using namespace nsgev;

namespace {

StationaryFit stationary(GevParams p) {
  StationaryFit f;
  f.params = p;
  f.converged = true;
  f.n = 30;
  f.cov = Eigen::Matrix3d::Identity() * 1e-3;
  return f;
}

FittedModel seasonal_fit(int seed = 1) {
  SyntheticTruth t;
  return fit_seasonal(simulate_monthly_maxima(t, 1991, 2020, seed));
}

}  // namespace

TEST(AnnualCdf, IdenticalMonthsProduct) {
  // A seasonal fit with every month at GEV(0,1,0): zero coefficients except
  // the intercept.
  FittedModel f = seasonal_fit();
  std::fill(f.beta_mu.begin(), f.beta_mu.end(), 0.0);
  std::fill(f.beta_logsigma.begin(), f.beta_logsigma.end(), 0.0);
  f.xi = 0.0;
  const Model m = f;
  EXPECT_NEAR(annual_cdf(m, 0.0, 2000), std::exp(-12.0), 1e-15);
  const double level = annual_return_level(m, 100.0, 2000);
  EXPECT_NEAR(level, gev_quantile(std::pow(0.99, 1.0 / 12.0), {0, 1, 0}), 1e-8);
}

TEST(AnnualCdf, BelowSupportIsZero) {
  FittedModel f = seasonal_fit();
  f.xi = 0.3;
  const Model m = f;
  double lowest = 1e300;
  for (int mo = 1; mo <= 12; ++mo) lowest = std::min(lowest, lower_support_bound(predict_params(f, mo, 2000)));
  EXPECT_EQ(annual_cdf(m, lowest - 1.0, 2000), 0.0);
}

TEST(AnnualCdf, MonotoneAndInversionIdentity) {
  const Model m = seasonal_fit(2);
  double prev = 0.0;
  for (double x = 0.0; x < 20.0; x += 0.05) {
    const double f = annual_cdf(m, x, 2000);
    EXPECT_GE(f, prev);
    prev = f;
  }
  double prev_level = -1e300;
  for (double n : {2.0, 10.0, 50.0, 100.0, 1000.0}) {
    const double x = annual_return_level(m, n, 2000);
    EXPECT_NEAR(annual_cdf(m, x, 2000), 1.0 - 1.0 / n, 1e-10);
    EXPECT_GT(x, prev_level);
    prev_level = x;
  }
  EXPECT_THROW((void)annual_return_level(m, 1.0, 2000), DomainError);
}

TEST(AnnualCdf, BruteForceMonteCarlo) {
  const FittedModel f = seasonal_fit(3);
  const Model m = f;
  Rng rng(99);
  std::vector<double> maxima(100000);
  for (auto& v : maxima) {
    v = -1e300;
    for (int mo = 1; mo <= 12; ++mo) v = std::max(v, gev_quantile(rng.uniform(), predict_params(f, mo, 2000)));
  }
  EXPECT_LT(testkit::ks_distance(maxima, [&](double x) { return annual_cdf(m, x, 2000); }), 0.01);
}

TEST(InvertBlockProduct, DominantMonth) {
  std::vector<GevParams> laws(12, GevParams{0.0, 1.0, 0.0});
  laws[6] = GevParams{30.0, 1.0, 0.1};
  const double x = invert_block_product(laws, std::log(0.99));
  EXPECT_NEAR(x, gev_quantile(0.99, laws[6]), 1e-8);
}

TEST(InvertBlockProduct, Errors) {
  std::vector<GevParams> laws(2, GevParams{0.0, 1.0, 0.0});
  EXPECT_THROW((void)invert_block_product(laws, 0.0), InversionError);
  EXPECT_THROW((void)invert_block_product({}, std::log(0.5)), InversionError);
}

TEST(Lifetime, Reductions) {
  const Model m = seasonal_fit(4);
  const std::vector<int> one{2000};
  EXPECT_NEAR(lifetime_cdf(m, 9.0, one), annual_cdf(m, 9.0, 2000), 1e-15);
  const Model s = stationary({5, 1, 0.1});
  const std::vector<int> thirty = lifetime_years(2001, 2030, 30);
  EXPECT_NEAR(log_lifetime_cdf(s, 9.0, thirty), 30.0 * log_annual_cdf(s, 9.0, 2001), 1e-12);
}

TEST(Lifetime, CompositionOverDisjointYears) {
  SyntheticTruth t;
  t.mu.trend = 1.0;
  const FittedModel f = fit_tensor(simulate_monthly_maxima(t, 1991, 2020, 5));
  const Model m = f;
  const std::vector<int> a{1991, 1992, 1993};
  const std::vector<int> b{2010, 2020};
  const std::vector<int> ab{1991, 1992, 1993, 2010, 2020};
  EXPECT_NEAR(log_lifetime_cdf(m, 10.0, ab), log_lifetime_cdf(m, 10.0, a) + log_lifetime_cdf(m, 10.0, b), 1e-10);
}

TEST(DesignLevel, StationaryIdentity) {
  const Model s = stationary({5, 1, 0.1});
  const auto years = lifetime_years(2001, 2030, 30);
  const DesignLevelResult r = equivalent_design_level(s, years, 0.01);
  EXPECT_NEAR(r.level, gev_quantile(0.99, {5, 1, 0.1}), 1e-8);
  EXPECT_NEAR(r.target_survival, 0.7397003733882802, 1e-15);
  EXPECT_EQ(r.target_survival, std::pow(0.99, 30));
  EXPECT_EQ(r.lifetime_years, 30);
  EXPECT_EQ(r.method, DesignMethod::annual);
}

TEST(DesignLevel, BoundedByPerYearLevels) {
  SyntheticTruth t;
  t.mu.trend = 1.5;
  const Model m = fit_tensor(simulate_monthly_maxima(t, 1991, 2020, 6));
  const auto years = lifetime_years(1991, 2020, 30);
  const DesignLevelResult r = equivalent_design_level(m, years, 0.01);
  double lo = 1e300;
  double hi = -1e300;
  for (int y : years) {
    const double l = annual_return_level(m, 100.0, y);
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  EXPECT_GE(r.level, lo);
  EXPECT_LE(r.level, hi);
  EXPECT_EQ(r.method, DesignMethod::nonstationary);
}

TEST(DesignLevel, InvariantUnderReordering) {
  const Model m = seasonal_fit(7);
  std::vector<int> years = lifetime_years(1991, 2020, 30);
  const double a = equivalent_design_level(m, years, 0.01).level;
  std::reverse(years.begin(), years.end());
  std::rotate(years.begin(), years.begin() + 7, years.end());
  EXPECT_EQ(equivalent_design_level(m, years, 0.01).level, a);
}

TEST(DesignLevel, Errors) {
  const Model s = stationary({5, 1, 0.1});
  const std::vector<int> none;
  EXPECT_THROW((void)equivalent_design_level(s, none, 0.01), DomainError);
  const std::vector<int> one{2000};
  EXPECT_THROW((void)equivalent_design_level(s, one, 0.0), DomainError);
  EXPECT_THROW((void)equivalent_design_level(s, one, 1.0), DomainError);
}

TEST(LifetimeYears, ExtensionRule) {
  EXPECT_EQ(lifetime_years(2081, 2100, 30).size(), 30u);
  const auto ext = lifetime_years(2081, 2100, 30);
  EXPECT_EQ(ext.front(), 2081);
  EXPECT_EQ(std::count(ext.begin(), ext.end(), 2100), 11);
  const auto trunc = lifetime_years(1991, 2020, 10);
  EXPECT_EQ(trunc.back(), 2000);
  EXPECT_THROW((void)lifetime_years(2000, 1999, 30), DomainError);
}

TEST(MonthlyQuantile, SeasonalCycle) {
  SyntheticTruth t;  // winter peak in January
  const FittedModel f = fit_seasonal(simulate_monthly_maxima(t, 1991, 2020, 8));
  EXPECT_GT(monthly_quantile(f, 1, 2000, 0.99), monthly_quantile(f, 7, 2000, 0.99));
  const double q = monthly_quantile(f, 3, 2000, 0.9);
  EXPECT_NEAR(gev_cdf(q, predict_params(f, 3, 2000)), 0.9, 1e-12);
  EXPECT_EQ(monthly_quantile(f, 3, 1991, 0.99), monthly_quantile(f, 3, 2020, 0.99));
}
