#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nsgev/error.hpp"
#include "nsgev/nonstationary.hpp"
#include "nsgev/random.hpp"
#include "nsgev/stationary.hpp"
#include "nsgev/synthetic.hpp"
#include "support.hpp"

using namespace nsgev;

namespace {

SyntheticTruth seasonal_truth() {
  SyntheticTruth t;
  t.mu = {4.0, 2.0, 0.0, 0.0};
  t.log_sigma = {0.2, 0.1, 0.0, 0.0};
  t.xi = 0.05;
  t.peak_month = 12;  // cos(2 pi m / 12)
  return t;
}

SyntheticTruth flat_truth() {
  SyntheticTruth t;
  t.mu = {4.0, 0.0, 0.0, 0.0};
  t.log_sigma = {0.2, 0.0, 0.0, 0.0};
  t.xi = 0.05;
  return t;
}

}  // namespace

TEST(Aicc, Formula) {
  EXPECT_NEAR(aicc(-100.0, 5.0, 100), 200.0 + 2.0 * 5.0 * 100.0 / 94.0, 1e-12);
  EXPECT_TRUE(std::isinf(aicc(-100.0, 99.5, 100)));
}

TEST(Seasonal, RecoversMonthlyLocation) {
  const SyntheticTruth truth = seasonal_truth();
  std::vector<std::vector<double>> err(12);
  for (int seed = 0; seed < 20; ++seed) {
    const auto bm = simulate_monthly_maxima(truth, 1991, 2020, 100 + seed);
    const FittedModel fit = fit_seasonal(bm);
    ASSERT_TRUE(fit.converged);
    for (int m = 1; m <= 12; ++m) {
      err[m - 1].push_back(predict_params(fit, m, 2000).mu - truth_params(truth, m, 2000, 1991, 2020).mu);
    }
  }
  for (int m = 0; m < 12; ++m) EXPECT_LT(std::abs(testkit::median(err[m])), 0.25) << "month " << m + 1;
}

TEST(Seasonal, FlatTruthSmoothsHeavily) {
  const auto grid = default_lambda_grid();
  int at_top = 0;
  for (int seed = 0; seed < 10; ++seed) {
    const auto bm = simulate_monthly_maxima(flat_truth(), 1991, 2020, 300 + seed);
    const SmoothingSelection sel = select_smoothing(bm, ModelKind::seasonal, BasisSpec{});
    // Top three grid values count as "near the maximum".
    if (sel.chosen.month >= grid[grid.size() - 3]) ++at_top;
    double spread = 0.0;
    double lo = 1e300;
    double hi = -1e300;
    for (int m = 1; m <= 12; ++m) {
      const double mu = predict_params(sel.model, m, 2000).mu;
      lo = std::min(lo, mu);
      hi = std::max(hi, mu);
    }
    spread = hi - lo;
    EXPECT_LT(spread, 0.6);
  }
  EXPECT_GE(at_top, 7);
}

TEST(Seasonal, OrderFree) {
  auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2010, 5);
  const FittedModel a = fit_seasonal(bm);
  std::reverse(bm.records.begin(), bm.records.end());
  const FittedModel b = fit_seasonal(bm);
  for (std::size_t i = 0; i < a.beta_mu.size(); ++i) EXPECT_NEAR(a.beta_mu[i], b.beta_mu[i], 1e-6);
  EXPECT_NEAR(a.xi, b.xi, 1e-6);
}

TEST(Seasonal, PredictionIndependentOfYearAndPositiveScale) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2010, 6);
  const FittedModel fit = fit_seasonal(bm);
  for (int m = 1; m <= 12; ++m) EXPECT_EQ(predict_params(fit, m, 1991), predict_params(fit, m, 2100));
}

TEST(Seasonal, DataSize) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 2001, 2004, 1);  // 48 records
  EXPECT_THROW((void)fit_seasonal(bm), DataSizeError);
  BlockMaximaSeries annual = bm;
  annual.kind = BlockKind::annual;
  EXPECT_THROW((void)fit_seasonal(annual), DomainError);
}

TEST(Tensor, DataSize) {
  const auto short_span = simulate_monthly_maxima(seasonal_truth(), 2001, 2009, 1);  // 9 years
  EXPECT_THROW((void)fit_tensor(short_span), DataSizeError);
}

TEST(Tensor, EdfLimits) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2020, 8);
  const FittedModel tight = fit_with_lambdas(bm, ModelKind::tensor, BasisSpec{}, {1e8, 1e8});
  const FittedModel loose = fit_with_lambdas(bm, ModelKind::tensor, BasisSpec{}, {1e-8, 1e-8});
  const std::size_t p = tight.beta_mu.size();
  const double null_dim = 2.0 * tight.basis->null_space_dim() + 1.0;
  EXPECT_NEAR(tight.edf, null_dim, 0.1);
  EXPECT_NEAR(loose.edf, 2.0 * p + 1.0, 0.5);
}

TEST(Tensor, EdfMonotoneInLambda) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2020, 9);
  double prev_month = 1e300;
  double prev_year = 1e300;
  const FittedModel* warm = nullptr;
  FittedModel last;
  for (double l : default_lambda_grid()) {
    const FittedModel f = fit_with_lambdas(bm, ModelKind::tensor, BasisSpec{}, {l, 1.0}, {}, warm);
    EXPECT_LE(f.edf, prev_month + 1e-6);
    prev_month = f.edf;
    last = f;
    warm = &last;
  }
  for (double l : default_lambda_grid()) {
    const FittedModel f = fit_with_lambdas(bm, ModelKind::tensor, BasisSpec{}, {1.0, l});
    EXPECT_LE(f.edf, prev_year + 1e-6);
    prev_year = f.edf;
  }
}

TEST(Tensor, PredictionContract) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2020, 10);
  const FittedModel fit = fit_tensor(bm);
  EXPECT_TRUE(fit.converged);
  EXPECT_EQ(year_range(fit), (std::pair{1991, 2020}));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const int m = 1 + static_cast<int>(rng.uniform() * 12);
    const int y = 1991 + static_cast<int>(rng.uniform() * 30);
    const GevParams p = predict_params(fit, m, y);
    EXPECT_GT(p.sigma, 0.0);
    EXPECT_EQ(p.xi, fit.xi);
  }
  EXPECT_THROW((void)predict_params(fit, 1, 2021), ExtrapolationError);
  EXPECT_TRUE(std::isfinite(fit.penalized_loglik));
}

TEST(Tensor, SelectionTraceAndChoice) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2020, 11);
  const SmoothingSelection sel = select_smoothing(bm, ModelKind::tensor, BasisSpec{});
  ASSERT_FALSE(sel.trace.empty());
  double best = 1e300;
  for (const auto& e : sel.trace) {
    if (e.converged) best = std::min(best, e.aicc);
  }
  const auto chosen = std::find_if(sel.trace.begin(), sel.trace.end(),
                                   [&](const SelectionEntry& e) { return e.lambdas == sel.chosen; });
  ASSERT_NE(chosen, sel.trace.end());
  EXPECT_DOUBLE_EQ(chosen->aicc, best);
  EXPECT_EQ(sel.model.lambdas, sel.chosen);
}

TEST(Tensor, PenalizedAscentFromInitialization) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2020, 12);
  const FittedModel fit = fit_with_lambdas(bm, ModelKind::tensor, BasisSpec{}, {1.0, 1.0});
  // The start has only intercepts and xi; its penalty is zero, so its penalized
  // loglik equals the loglik of the L-moment stationary law.
  const GevParams start = lmoments_init(bm.included_maxima());
  EXPECT_GE(fit.penalized_loglik, gev_loglik(start, bm.included_maxima()));
}

TEST(Refit, SameDataSameFit) {
  const auto bm = simulate_monthly_maxima(seasonal_truth(), 1991, 2020, 13);
  const FittedModel fit = fit_tensor(bm);
  const FittedModel again = refit_at_design(fit, bm.included_maxima());
  for (std::size_t i = 0; i < fit.beta_mu.size(); ++i) EXPECT_NEAR(again.beta_mu[i], fit.beta_mu[i], 1e-4);
  EXPECT_NEAR(again.xi, fit.xi, 1e-5);
  EXPECT_EQ(again.lambdas, fit.lambdas);
}
