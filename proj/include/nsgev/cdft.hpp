#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "nsgev/ingest.hpp"

namespace nsgev {

// Piecewise-linear empirical CDF on Hazen positions (i - 0.5) / n. Tied
// values share one knot at the mean of their positions.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> sample);

  // Clamped to the end positions outside the sample range.
  [[nodiscard]] double cdf(double x) const;
  // Clamped to the extreme values outside the position range.
  [[nodiscard]] double quantile(double p) const;

  [[nodiscard]] const std::vector<double>& sorted_values() const { return values_; }
  [[nodiscard]] const std::vector<double>& plotting_positions() const { return positions_; }
  [[nodiscard]] std::size_t sample_size() const { return n_; }

 private:
  std::vector<double> values_;
  std::vector<double> positions_;
  std::size_t n_;
};

inline EmpiricalCdf ecdf(std::span<const double> sample) { return EmpiricalCdf(sample); }

inline constexpr std::size_t kCdftMinSample = 30;

struct CdftOptions {
  std::size_t min_sample = kCdftMinSample;
  double floor = 0.0;
};

struct CdftOutput {
  std::vector<double> values;
  std::size_t clamped = 0;
};

// Maps each future model value x to Q_fm(F_rm(Q_rl(F_fm(x)))), which is the
// inverse of F_rl(F_rm^-1(F_fm(.))) evaluated at F_fm(x). Where a composition
// step leaves a knot range the map continues with the constant offset of the
// nearest future value that stays inside. Outputs below options.floor are
// clamped and counted.
CdftOutput cdft_correct(std::span<const double> ref_local, std::span<const double> ref_model,
                        std::span<const double> fut_model, const CdftOptions& options = {});

struct MonthSummary {
  int month = 0;
  std::size_t n_ref_local = 0;
  std::size_t n_ref_model = 0;
  std::size_t n_fut_model = 0;
  double mean_ref_local = 0.0;
  double mean_ref_model = 0.0;
  double mean_fut_model = 0.0;
  double mean_corrected = 0.0;
  std::size_t clamped = 0;
};

struct MonthlyCdftResult {
  RawSeries corrected;  // same timestamps as the future model series
  std::array<MonthSummary, 12> months{};
  std::size_t clamped = 0;
};

// cdft_correct on each calendar month separately. Missing values stay in
// place. Throws StratificationError when a month has no observations in any
// input.
MonthlyCdftResult cdft_correct_monthly(const RawSeries& ref_local, const RawSeries& ref_model,
                                       const RawSeries& fut_model, const CdftOptions& options = {});

void write_month_summary(std::ostream& out, const MonthlyCdftResult& result);

}  // namespace nsgev
