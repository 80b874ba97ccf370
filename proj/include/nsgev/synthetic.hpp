#pragma once

// Synthetic monthly-maxima generator with a closed-form truth, used by the
// `simulate` subcommand and by the recovery tests.
//
//   s(y)       = (y - first) / (last - first)
//   c(m)       = cos(2 pi (m - peak_month) / 12)
//   mu(m, y)   = mu.base + (mu.amplitude + mu.amplitude_trend s) c + mu.trend s
//   log sigma  = same form with the log_sigma coefficients
//   xi         = constant
//
// With ar1 != 0 consecutive months share a Gaussian AR(1) copula, so the
// maxima are serially dependent while every marginal stays GEV.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nsgev/gev.hpp"
#include "nsgev/ingest.hpp"

namespace nsgev {

struct SurfaceTruth {
  double base = 0.0;
  double amplitude = 0.0;
  double amplitude_trend = 0.0;
  double trend = 0.0;
};

struct SyntheticTruth {
  SurfaceTruth mu{4.0, 2.0, 0.0, 0.0};
  SurfaceTruth log_sigma{0.2, 0.1, 0.0, 0.0};
  double xi = 0.05;
  int peak_month = 1;
  double ar1 = 0.0;
};

[[nodiscard]] GevParams truth_params(const SyntheticTruth& truth, int month, int year, int first_year,
                                     int last_year);

BlockMaximaSeries simulate_monthly_maxima(const SyntheticTruth& truth, int first_year, int last_year,
                                          std::uint64_t seed);

// 3-hourly series whose monthly maxima equal `maxima` exactly: every other
// sample is drawn strictly below its month's peak.
RawSeries embed_in_series(const BlockMaximaSeries& maxima, std::int64_t step_seconds, std::uint64_t seed);

SyntheticTruth truth_from_json(const std::string& text);
std::string truth_to_json(const SyntheticTruth& truth);

}  // namespace nsgev
