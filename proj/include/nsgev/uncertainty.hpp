#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nsgev/return_levels.hpp"

namespace nsgev {

// Maps a fitted model to the derived quantities being bootstrapped.
using Statistic = std::function<std::vector<double>(const Model&)>;

struct BootstrapOptions {
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  // Fail when more than this fraction of replicates cannot be refitted.
  double max_failure_fraction = 0.2;
};

struct BootstrapResult {
  std::size_t requested = 0;
  // One row per successful replicate, in replicate order.
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> replicate_ids;
  std::vector<std::size_t> failed_ids;

  [[nodiscard]] std::vector<double> column(std::size_t j) const;
};

inline constexpr std::size_t kMinReplicates = 50;

// Parametric bootstrap: replicate b draws a synthetic dataset from `model`
// at its original design points with Rng(stream_seed(seed, b)), refits the
// same model class (smoothing parameters held at the fitted values) and
// evaluates `statistic`. Results do not depend on the worker count.
// Throws DomainError for replicates < kMinReplicates and DegenerateError
// when failures exceed max_failure_fraction.
BootstrapResult parametric_bootstrap(const Model& model, const Statistic& statistic,
                                     const BootstrapOptions& options = {});

// Simulated block maxima at the model's design points (annual for
// stationary fits).
std::vector<double> simulate_from_model(const Model& model, std::uint64_t seed);

// Hazen-interpolated empirical quantile, positions (i - 0.5) / n.
[[nodiscard]] double hazen_quantile(std::span<const double> samples, double prob);
// ((1 - level) / 2, 1 - (1 - level) / 2) Hazen quantiles.
[[nodiscard]] std::pair<double, double> percentile_ci(std::span<const double> samples, double level);

}  // namespace nsgev
