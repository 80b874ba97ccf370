#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "nsgev/cdft.hpp"
#include "nsgev/error.hpp"
#include "nsgev/gev.hpp"
#include "nsgev/random.hpp"
#include "support.hpp"

using namespace nsgev;

namespace {

std::vector<double> gumbel(std::size_t n, std::uint64_t seed, double shift = 0.0) {
  auto v = gev_sample({3.0, 0.6, 0.0}, n, seed);
  for (auto& x : v) x += shift;
  return v;
}

double quantile_of(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  return EmpiricalCdf(v).quantile(p);
}

// Twice-daily series over whole years with a per-month offset.
RawSeries monthly_series(int y0, int y1, std::uint64_t seed, const std::function<double(int)>& offset) {
  RawSeries s;
  Rng rng(seed);
  for (int y = y0; y <= y1; ++y) {
    for (int m = 1; m <= 12; ++m) {
      const std::int64_t start = to_epoch_seconds({y, m, 1, 0, 0, 0});
      for (int k = 0; k < days_in_month(y, m) * 2; ++k) {
        s.times.push_back(start + k * 12 * 3600);
        s.values.push_back(2.0 + 0.1 * m + gev_quantile(rng.uniform(), {0, 0.5, 0}) + offset(m));
      }
    }
  }
  s.step_seconds = 12 * 3600;
  return s;
}

}  // namespace

TEST(Ecdf, HazenExamples) {
  const std::vector<double> xs{1, 2, 3};
  const EmpiricalCdf e(xs);
  ASSERT_EQ(e.plotting_positions().size(), 3u);
  EXPECT_DOUBLE_EQ(e.plotting_positions()[0], 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(e.plotting_positions()[1], 0.5);
  EXPECT_DOUBLE_EQ(e.plotting_positions()[2], 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(e.cdf(2.0), 0.5);
  EXPECT_DOUBLE_EQ(e.quantile(0.5), 2.0);
  EXPECT_DOUBLE_EQ(e.cdf(1.5), (1.0 / 6.0 + 0.5) / 2.0);
}

TEST(Ecdf, TiesCollapseAndErrors) {
  const std::vector<double> xs{1, 2, 2, 3};
  const EmpiricalCdf e(xs);
  ASSERT_EQ(e.sorted_values().size(), 3u);
  EXPECT_DOUBLE_EQ(e.plotting_positions()[1], 0.5);  // mean of 3/8 and 5/8
  for (std::size_t i = 1; i < e.plotting_positions().size(); ++i) {
    EXPECT_GT(e.plotting_positions()[i], e.plotting_positions()[i - 1]);
  }
  EXPECT_THROW(EmpiricalCdf(std::vector<double>{1.0}), DomainError);
}

TEST(Cdft, IdentityWithoutBias) {
  const auto ref = gumbel(2000, 1);
  const auto fut = gumbel(3000, 2, 0.4);
  const CdftOutput out = cdft_correct(ref, ref, fut);
  ASSERT_EQ(out.values.size(), fut.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < fut.size(); ++i) worst = std::max(worst, std::abs(out.values[i] - fut[i]));
  EXPECT_LT(worst, 1e-9);
}

TEST(Cdft, SameDistributionMapsToReferenceLocal) {
  const auto rl = gumbel(10000, 3, -0.5);
  const auto rm = gumbel(10000, 4);
  const auto fm = gumbel(10000, 5);
  const CdftOutput out = cdft_correct(rl, rm, fm);
  EXPECT_LT(testkit::ks_two_sample(out.values, rl), 0.05);
}

TEST(Cdft, ConstantBiasRemoved) {
  const auto rl = gumbel(10000, 6);
  const auto rm = gumbel(10000, 7, 1.0);
  const auto fut_truth = gumbel(10000, 8, 0.3);
  std::vector<double> fm = fut_truth;
  for (auto& x : fm) x += 1.0;
  const CdftOutput out = cdft_correct(rl, rm, fm);
  for (double p : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95}) {
    EXPECT_NEAR(quantile_of(out.values, p), quantile_of(fut_truth, p), 0.05) << "p=" << p;
  }
}

TEST(Cdft, RankPreservation) {
  const auto rl = gumbel(500, 9);
  const auto rm = gumbel(600, 10, 0.7);
  const auto fm = gumbel(700, 11, 1.1);
  const CdftOutput out = cdft_correct(rl, rm, fm);
  for (std::size_t i = 0; i < fm.size(); ++i) {
    for (std::size_t j = 0; j < fm.size(); ++j) {
      if (fm[i] < fm[j]) ASSERT_LE(out.values[i], out.values[j]);
    }
  }
}

TEST(Cdft, ClampsAtZero) {
  std::vector<double> rl(100), rm(100), fm(100);
  for (int i = 0; i < 100; ++i) {
    rl[i] = 0.01 * i;
    rm[i] = 0.5 + 0.01 * i;
    fm[i] = 0.3 + 0.01 * i;
  }
  const CdftOutput out = cdft_correct(rl, rm, fm);
  EXPECT_GT(out.clamped, 0u);
  for (double v : out.values) EXPECT_GE(v, 0.0);
}

TEST(Cdft, DisjointReferenceRejected) {
  std::vector<double> rl(100), rm(100), fm(100);
  for (int i = 0; i < 100; ++i) {
    rl[i] = 0.01 * i;
    rm[i] = 3.0 + 0.01 * i;
    fm[i] = 2.0 + 0.02 * i;
  }
  EXPECT_THROW((void)cdft_correct(rl, rm, fm), DegenerateError);
}

TEST(Cdft, Errors) {
  const auto ok = gumbel(100, 12);
  const std::vector<double> flat(100, 2.0);
  EXPECT_THROW((void)cdft_correct(flat, ok, ok), DegenerateError);
  EXPECT_THROW((void)cdft_correct(ok, ok, flat), DegenerateError);
  const std::vector<double> few(ok.begin(), ok.begin() + 29);
  EXPECT_THROW((void)cdft_correct(few, ok, ok), DataSizeError);
  CdftOptions lax;
  lax.min_sample = 10;
  EXPECT_NO_THROW((void)cdft_correct(few, ok, ok, lax));
}

TEST(CdftMonthly, IdentityAndTimestamps) {
  const RawSeries ref = monthly_series(2000, 2003, 1, [](int) { return 0.0; });
  const RawSeries fut = monthly_series(2080, 2083, 2, [](int) { return 0.3; });
  const MonthlyCdftResult r = cdft_correct_monthly(ref, ref, fut);
  EXPECT_EQ(r.corrected.times, fut.times);
  for (std::size_t i = 0; i < fut.size(); ++i) EXPECT_NEAR(r.corrected.values[i], fut.values[i], 1e-9);
}

TEST(CdftMonthly, MonthSpecificBiasRemoved) {
  const auto bias = [](int m) { return 0.1 * m; };
  const RawSeries local = monthly_series(2000, 2029, 3, [](int) { return 0.0; });
  const RawSeries model = monthly_series(2000, 2029, 4, bias);
  const RawSeries fut = monthly_series(2070, 2099, 5, bias);
  const MonthlyCdftResult r = cdft_correct_monthly(local, model, fut);
  // Three independent samples of ~1800 values with sd 0.64 each: the
  // difference of means has sd ~0.026, so 0.11 is about 4 sd.
  const double tol = 0.11;
  for (const auto& s : r.months) {
    // Future truth has the local distribution, so corrected means match the
    // local mean, not the biased model mean.
    EXPECT_NEAR(s.mean_corrected, s.mean_ref_local, tol) << "month " << s.month;
    EXPECT_NEAR(s.mean_fut_model - s.mean_corrected, bias(s.month), tol) << "month " << s.month;
  }
}

TEST(CdftMonthly, MissingMonthNamed) {
  const RawSeries ref = monthly_series(2000, 2003, 1, [](int) { return 0.0; });
  RawSeries gap;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (from_epoch_seconds(ref.times[i]).month != 7) {
      gap.times.push_back(ref.times[i]);
      gap.values.push_back(ref.values[i]);
    }
  }
  try {
    (void)cdft_correct_monthly(ref, gap, ref);
    FAIL() << "expected StratificationError";
  } catch (const StratificationError& e) {
    EXPECT_NE(std::string(e.what()).find("July"), std::string::npos);
  }
}

TEST(CdftMonthly, MissingValuesStayInPlace) {
  const RawSeries ref = monthly_series(2000, 2003, 1, [](int) { return 0.0; });
  RawSeries fut = monthly_series(2080, 2083, 2, [](int) { return 0.2; });
  fut.values[10] = std::nan("");
  const MonthlyCdftResult r = cdft_correct_monthly(ref, ref, fut);
  EXPECT_TRUE(std::isnan(r.corrected.values[10]));
}
