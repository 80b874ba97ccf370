#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nsgev/gev.hpp"
#include "nsgev/ingest.hpp"
#include "nsgev/likelihood.hpp"
#include "nsgev/spline.hpp"

namespace nsgev {

// 15 log-spaced values over [1e-4, 1e4].
[[nodiscard]] std::vector<double> default_lambda_grid();

struct FitOptions {
  std::vector<double> lambda_grid = default_lambda_grid();
  XiBounds xi_bounds;
  double gradient_tolerance = 1e-6;
  int max_iterations = 2000;
};

// Smoothing parameters shared by the mu and log-sigma surfaces.
struct Lambdas {
  double month = 0.0;
  double year = 0.0;

  friend bool operator==(const Lambdas&, const Lambdas&) = default;
};

struct FittedModel {
  ModelKind kind = ModelKind::seasonal;
  BasisSpec spec;
  XiBounds xi_bounds;
  std::vector<double> beta_mu;
  std::vector<double> beta_logsigma;
  double xi = 0.0;
  Lambdas lambdas;
  // Penalized observed information in [beta_mu | beta_logsigma | xi].
  Eigen::MatrixXd penalized_hessian;
  double loglik = 0.0;
  double penalized_loglik = 0.0;
  double edf = 0.0;
  double edf_year = 0.0;
  std::size_t n = 0;
  bool converged = false;
  int iterations = 0;
  std::uint64_t data_fingerprint = 0;
  std::vector<DesignPoint> design_points;
  std::shared_ptr<const SurfaceBasis> basis;
};

struct SelectionEntry {
  Lambdas lambdas;
  double loglik = 0.0;
  double edf = 0.0;
  double aicc = 0.0;
  bool converged = false;
};

struct SmoothingSelection {
  Lambdas chosen;
  std::vector<SelectionEntry> trace;
  FittedModel model;
};

// AICc = -2 loglik + 2 edf n / (n - edf - 1); +inf when n - edf - 1 <= 0.
[[nodiscard]] double aicc(double loglik, double edf, std::size_t n);

// Penalized fit at fixed smoothing parameters. `warm_start`, when given and
// of matching dimension, seeds the optimizer. Returns converged = false
// rather than throwing when the optimizer stalls.
FittedModel fit_with_lambdas(const BlockMaximaSeries& maxima, ModelKind kind, const BasisSpec& spec,
                             Lambdas lambdas, const FitOptions& options = {},
                             const FittedModel* warm_start = nullptr);

// AICc search over options.lambda_grid (warm-started chains; coordinate-wise
// over the month and year directions for tensor models).
SmoothingSelection select_smoothing(const BlockMaximaSeries& maxima, ModelKind kind, const BasisSpec& spec,
                                    const FitOptions& options = {});

// Seasonal model: cyclic month smooths for mu and log sigma, constant xi.
FittedModel fit_seasonal(const BlockMaximaSeries& maxima, const BasisSpec& spec = {},
                         const FitOptions& options = {});
// Month x year tensor model.
FittedModel fit_tensor(const BlockMaximaSeries& maxima, const BasisSpec& spec = {}, const FitOptions& options = {});

// Refit `model`'s class, spec and smoothing parameters to new maxima observed
// at model.design_points (same order).
FittedModel refit_at_design(const FittedModel& model, std::span<const double> maxima,
                            const FitOptions& options = {});

// Rebuild the cached basis after deserialization.
void attach_basis(FittedModel& model);

[[nodiscard]] GevParams predict_params(const FittedModel& model, int month, int year);

// Year window the model may be evaluated on (fit window; full design range
// for seasonal models).
[[nodiscard]] std::pair<int, int> year_range(const FittedModel& model);

}  // namespace nsgev
