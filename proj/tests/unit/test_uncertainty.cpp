#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsgev/error.hpp"
#include "nsgev/synthetic.hpp"
#include "nsgev/uncertainty.hpp"
#include "support.hpp"

using namespace nsgev;

namespace {

Statistic location_statistic() {
  return [](const Model& m) {
    return std::vector<double>{std::get<StationaryFit>(m).params.mu};
  };
}

}  // namespace

TEST(PercentileCi, HazenExample) {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  const auto [lo, hi] = percentile_ci(xs, 0.95);
  EXPECT_NEAR(lo, 3.0, 1e-12);
  EXPECT_NEAR(hi, 98.0, 1e-12);
}

TEST(PercentileCi, ZeroLevelIsMedian) {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  const auto [lo, hi] = percentile_ci(xs, 0.0);
  EXPECT_DOUBLE_EQ(lo, 50.5);
  EXPECT_DOUBLE_EQ(hi, 50.5);
}

TEST(PercentileCi, OrderFreeAndErrors) {
  std::vector<double> xs{5, 1, 9, 3, 7, 2, 8};
  const auto a = percentile_ci(xs, 0.8);
  std::reverse(xs.begin(), xs.end());
  EXPECT_EQ(percentile_ci(xs, 0.8), a);
  EXPECT_THROW((void)percentile_ci(std::vector<double>{}, 0.9), DomainError);
  EXPECT_THROW((void)percentile_ci(xs, 1.0), DomainError);
}

TEST(Bootstrap, MeanNearFittedValue) {
  const auto xs = gev_sample({5, 1, 0.1}, 200, 1);
  const Model m = fit_gev_mle(xs);
  BootstrapOptions opts;
  opts.replicates = 200;
  opts.seed = 3;
  const BootstrapResult r = parametric_bootstrap(m, location_statistic(), opts);
  const auto col = r.column(0);
  const double mean = std::accumulate(col.begin(), col.end(), 0.0) / col.size();
  double var = 0.0;
  for (double v : col) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (col.size() - 1) / col.size());
  EXPECT_LT(std::abs(mean - std::get<StationaryFit>(m).params.mu), 2.0 * se + 1e-3);
  EXPECT_EQ(r.values.size() + r.failed_ids.size(), r.requested);
}

TEST(Bootstrap, PrefixDeterminism) {
  const Model m = fit_gev_mle(gev_sample({5, 1, 0.1}, 100, 2));
  BootstrapOptions a;
  a.replicates = 50;
  a.seed = 11;
  BootstrapOptions b = a;
  b.replicates = 51;
  const auto ra = parametric_bootstrap(m, location_statistic(), a);
  const auto rb = parametric_bootstrap(m, location_statistic(), b);
  ASSERT_EQ(ra.values.size(), 50u);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(ra.values[i], rb.values[i]);
}

TEST(Bootstrap, WorkerCountIndependent) {
  SyntheticTruth t;
  const Model m = fit_seasonal(simulate_monthly_maxima(t, 1991, 2010, 4));
  const Statistic stat = [](const Model& model) {
    return std::vector<double>{annual_return_level(model, 100.0, 2000)};
  };
  BootstrapOptions one;
  one.replicates = 50;
  one.seed = 5;
  BootstrapOptions four = one;
  four.workers = 4;
  const auto a = parametric_bootstrap(m, stat, one);
  const auto b = parametric_bootstrap(m, stat, four);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.replicate_ids, b.replicate_ids);
}

TEST(Bootstrap, RejectsFewReplicates) {
  const Model m = fit_gev_mle(gev_sample({5, 1, 0.1}, 100, 2));
  BootstrapOptions opts;
  opts.replicates = 49;
  EXPECT_THROW((void)parametric_bootstrap(m, location_statistic(), opts), DomainError);
}

TEST(Bootstrap, DegenerateWhenReplicatesFail) {
  const Model m = fit_gev_mle(gev_sample({5, 1, 0.1}, 100, 2));
  const Statistic failing = [](const Model&) -> std::vector<double> { throw DegenerateError("boom"); };
  BootstrapOptions opts;
  opts.replicates = 50;
  EXPECT_THROW((void)parametric_bootstrap(m, failing, opts), DegenerateError);
}

TEST(Bootstrap, ExclusionAccounting) {
  const Model m = fit_gev_mle(gev_sample({5, 1, 0.1}, 100, 2));
  // Reject roughly one replicate in ten, keyed on the replicate value.
  const Statistic sometimes = [](const Model& model) -> std::vector<double> {
    const double mu = std::get<StationaryFit>(model).params.mu;
    if (std::fmod(std::abs(mu) * 1e6, 10.0) < 1.0) throw DegenerateError("rejected");
    return {mu};
  };
  BootstrapOptions opts;
  opts.replicates = 100;
  const auto r = parametric_bootstrap(m, sometimes, opts);
  EXPECT_EQ(r.values.size() + r.failed_ids.size(), 100u);
  EXPECT_GT(r.failed_ids.size(), 0u);
}

TEST(Bootstrap, CoverageOfTruth) {
  const GevParams truth{5, 1, 0.1};
  int covered = 0;
  const int outer = 100;
  for (int rep = 0; rep < outer; ++rep) {
    const Model m = fit_gev_mle(gev_sample(truth, 100, 500 + rep));
    BootstrapOptions opts;
    opts.replicates = 100;
    opts.seed = 900 + rep;
    const auto r = parametric_bootstrap(m, location_statistic(), opts);
    const auto [lo, hi] = percentile_ci(r.column(0), 0.95);
    if (lo <= truth.mu && truth.mu <= hi) ++covered;
  }
  EXPECT_GE(covered, 90);
}

TEST(Simulate, DesignPointsAndDeterminism) {
  SyntheticTruth t;
  const FittedModel f = fit_seasonal(simulate_monthly_maxima(t, 1991, 2000, 4));
  const auto a = simulate_from_model(f, 1);
  EXPECT_EQ(a.size(), f.design_points.size());
  EXPECT_EQ(a, simulate_from_model(f, 1));
  EXPECT_NE(a, simulate_from_model(f, 2));
}
