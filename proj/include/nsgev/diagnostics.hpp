#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nsgev/ingest.hpp"
#include "nsgev/return_levels.hpp"

namespace nsgev {

struct Residual {
  int year = 0;
  int month = 0;
  std::optional<double> value;  // empty for excluded blocks
};

struct ResidualSeries {
  std::vector<Residual> residuals;  // calendar order, gaps kept explicitly
  std::size_t gap_count = 0;

  // Non-missing residuals, contiguously reindexed.
  [[nodiscard]] std::vector<double> values() const;
};

// Probability integral transform of each block maximum through its fitted
// law, mapped to the standard Gumbel scale by -log(-log u) with u clamped to
// [1e-12, 1 - 1e-12]. Throws when a record lies outside the fitted window.
ResidualSeries pit_residuals(const Model& model, const BlockMaximaSeries& maxima);

struct Correlogram {
  std::vector<double> acf;   // lags 0..max_lag
  std::vector<double> pacf;  // lags 1..max_lag stored at index lag - 1
  double band = 0.0;         // 1.96 / sqrt(n)
  std::size_t n = 0;
};

// Biased-normalization sample autocorrelation, lags 0..max_lag.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);
// Durbin-Levinson partial autocorrelations, lags 1..max_lag.
std::vector<double> pacf(std::span<const double> series, std::size_t max_lag);
Correlogram correlogram(std::span<const double> series, std::size_t max_lag);

// (empirical, model) pairs: sorted Gumbel-scale residuals against standard
// Gumbel quantiles at Hazen positions.
std::vector<std::pair<double, double>> qq_data(const Model& model, const BlockMaximaSeries& maxima);

}  // namespace nsgev
