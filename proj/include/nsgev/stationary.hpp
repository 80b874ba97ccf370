#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "nsgev/error.hpp"
#include "nsgev/gev.hpp"
#include "nsgev/ingest.hpp"
#include "nsgev/likelihood.hpp"

namespace nsgev {

struct LMoments {
  double l1 = 0.0;
  double l2 = 0.0;
  double t3 = 0.0;
};

// Unbiased sample L-moments via probability-weighted moments.
[[nodiscard]] LMoments sample_lmoments(std::span<const double> sample);

// Hosking's L-moment GEV estimator; xi clamped to [-0.5, 0.5].
// Throws DataSizeError for n < 5 and DegenerateError for zero L-scale.
[[nodiscard]] GevParams lmoments_init(std::span<const double> sample);

struct StationaryOptions {
  XiBounds xi_bounds;
  double gradient_tolerance = 1e-6;
  int max_restarts = 5;
  std::uint64_t restart_seed = 0x5eedULL;
};

struct StationaryFit {
  GevParams params;
  // Inverse observed information in (mu, log sigma, xi).
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double loglik = 0.0;
  std::size_t n = 0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t data_fingerprint = 0;
  XiBounds xi_bounds;
};

class StationaryConvergenceError : public ConvergenceError {
 public:
  StationaryConvergenceError(const std::string& msg, StationaryFit best)
      : ConvergenceError(msg), best_(std::move(best)) {}
  [[nodiscard]] const StationaryFit& best() const { return best_; }

 private:
  StationaryFit best_;
};

StationaryFit fit_gev_mle(std::span<const double> sample, const StationaryOptions& options = {});
// Fits the included maxima of `series` and records its fingerprint.
StationaryFit fit_stationary(const BlockMaximaSeries& series, const StationaryOptions& options = {});

struct LevelEstimate {
  double level = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// gev_quantile(1 - 1/N) with a delta-method interval at `confidence`.
[[nodiscard]] LevelEstimate return_level_stationary(const StationaryFit& fit, double return_period,
                                                    double confidence = 0.95);

// d quantile / d (mu, log sigma, xi)
[[nodiscard]] Eigen::Vector3d quantile_gradient(double prob, const GevParams& p);

}  // namespace nsgev
