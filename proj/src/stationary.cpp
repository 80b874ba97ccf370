#include "nsgev/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nsgev/optimize.hpp"
#include "nsgev/random.hpp"

namespace nsgev {
namespace {

double normal_quantile_two_sided(double confidence) {
  // Acklam-free: bisection on the normal CDF is plenty for a one-off value.
  const double target = 0.5 + confidence / 2.0;
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (standard_normal_cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

GevRegression intercept_model(std::span<const double> sample, const XiBounds& bounds) {
  DesignMatrix x;
  x.rows = sample.size();
  x.cols = 1;
  x.values.assign(sample.size(), 1.0);
  x.column_labels = {"(Intercept)"};
  return {std::move(x), std::vector<double>(sample.begin(), sample.end()), Eigen::MatrixXd(), bounds};
}

double clamp_inside(double xi, const XiBounds& b) {
  const double margin = 1e-3 * (b.upper - b.lower);
  return std::clamp(xi, b.lower + margin, b.upper - margin);
}

}  // namespace

LMoments sample_lmoments(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3) throw DataSizeError("L-moments need at least 3 points");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i);
    b0 += x[i];
    b1 += j / (nn - 1.0) * x[i];
    b2 += j * (j - 1.0) / ((nn - 1.0) * (nn - 2.0)) * x[i];
  }
  b0 /= nn;
  b1 /= nn;
  b2 /= nn;
  LMoments m;
  m.l1 = b0;
  m.l2 = 2.0 * b1 - b0;
  const double l3 = 6.0 * b2 - 6.0 * b1 + b0;
  m.t3 = m.l2 > 0.0 ? l3 / m.l2 : 0.0;
  return m;
}

GevParams lmoments_init(std::span<const double> sample) {
  if (sample.size() < 5) throw DataSizeError("L-moment initialization needs at least 5 points");
  for (double v : sample) {
    if (!std::isfinite(v)) throw DomainError("sample contains a non-finite value");
  }
  const LMoments m = sample_lmoments(sample);
  const double spread = std::max(std::abs(m.l1), 1.0);
  if (!(m.l2 > 1e-12 * spread)) throw DegenerateError("sample has zero L-scale; cannot initialize a GEV fit");

  // Hosking (1985): k = 7.8590 c + 2.9554 c^2, xi = -k.
  const double c = 2.0 / (3.0 + m.t3) - std::numbers::ln2 / std::log(3.0);
  const double k = std::clamp(7.8590 * c + 2.9554 * c * c, -0.5, 0.5);
  GevParams p;
  p.xi = -k;
  if (std::abs(k) < 1e-6) {
    p.sigma = m.l2 / std::numbers::ln2;
    p.mu = m.l1 - std::numbers::egamma * p.sigma;
  } else {
    const double g = std::tgamma(1.0 + k);
    p.sigma = m.l2 * k / ((1.0 - std::pow(2.0, -k)) * g);
    p.mu = m.l1 - p.sigma * (1.0 - g) / k;
  }
  return p;
}

StationaryFit fit_gev_mle(std::span<const double> sample, const StationaryOptions& options) {
  if (sample.size() < 5) {
    throw DataSizeError("stationary GEV fit needs at least 5 maxima, got " + std::to_string(sample.size()));
  }
  const GevParams init = lmoments_init(sample);
  const GevRegression model = intercept_model(sample, options.xi_bounds);
  const XiBounds& b = options.xi_bounds;

  auto start_from = [&](double mu, double log_sigma, double xi) {
    Eigen::VectorXd theta(3);
    theta << mu, log_sigma, b.eta(clamp_inside(xi, b));
    if (!std::isfinite(model.objective(theta, nullptr))) theta(2) = b.eta(clamp_inside(0.0, b));
    return theta;
  };

  const Objective f = [&](const Eigen::VectorXd& t, Eigen::VectorXd* g) { return model.objective(t, g); };
  const HessianFn h = [&](const Eigen::VectorXd& t) { return model.hessian(t); };
  OptimizerOptions opt;
  opt.gradient_tolerance = options.gradient_tolerance;

  Rng jitter(options.restart_seed);
  OptimizerResult best;
  Eigen::VectorXd theta = start_from(init.mu, std::log(init.sigma), init.xi);
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    if (attempt > 0) {
      theta = start_from(init.mu + 0.25 * init.sigma * jitter.normal(),
                         std::log(init.sigma) + 0.2 * jitter.normal(), 0.2 * (2.0 * jitter.uniform() - 1.0));
    }
    OptimizerResult r = minimize_bfgs(f, theta, opt, h);
    const bool better = attempt == 0 || (r.converged != best.converged ? r.converged : r.value < best.value);
    if (better) best = std::move(r);
    if (best.converged) break;
  }

  StationaryFit fit;
  fit.n = sample.size();
  fit.xi_bounds = b;
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  if (best.x.size() == 3) {
    fit.params = {best.x(0), std::exp(best.x(1)), b.xi(best.x(2))};
    fit.loglik = -best.value;
  }
  if (!fit.converged) throw StationaryConvergenceError("stationary GEV fit did not converge: " + best.message, fit);

  const Eigen::MatrixXd info = model.information(best.x, false);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  fit.cov = ldlt.solve(Eigen::MatrixXd::Identity(3, 3));
  fit.cov = 0.5 * (fit.cov + fit.cov.transpose()).eval();
  return fit;
}

StationaryFit fit_stationary(const BlockMaximaSeries& series, const StationaryOptions& options) {
  const auto maxima = series.included_maxima();
  StationaryFit fit = fit_gev_mle(maxima, options);
  fit.data_fingerprint = fingerprint(series);
  return fit;
}

Eigen::Vector3d quantile_gradient(double prob, const GevParams& p) {
  const double q = gev_quantile(prob, p);
  const double l = std::log(-std::log(prob));
  const double xi = std::abs(p.xi) < kGumbelThreshold ? 0.0 : p.xi;
  double dh = 0.0;
  if (std::abs(xi * l) < 1e-4) {
    dh = l * l / 2.0 - xi * l * l * l / 3.0 + xi * xi * l * l * l * l / 8.0;
  } else {
    dh = (-l * std::exp(-xi * l) * xi - std::expm1(-xi * l)) / (xi * xi);
  }
  return {1.0, q - p.mu, p.sigma * dh};
}

LevelEstimate return_level_stationary(const StationaryFit& fit, double return_period, double confidence) {
  if (!fit.converged) throw DomainError("return level requested from a non-converged fit");
  if (!(return_period > 1.0)) throw DomainError("return period must exceed 1 year");
  if (!(confidence >= 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in [0, 1)");
  const double prob = 1.0 - 1.0 / return_period;
  LevelEstimate out;
  out.level = gev_quantile(prob, fit.params);
  const Eigen::Vector3d g = quantile_gradient(prob, fit.params);
  const double sd = std::sqrt(std::max(0.0, g.dot(fit.cov * g)));
  const double z = confidence == 0.0 ? 0.0 : normal_quantile_two_sided(confidence);
  out.lower = out.level - z * sd;
  out.upper = out.level + z * sd;
  return out;
}

}  // namespace nsgev
