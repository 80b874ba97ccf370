#include "nsgev/optimize.hpp"

#include <cmath>
#include <limits>

namespace nsgev {
namespace {

Eigen::MatrixXd floored_inverse(const Eigen::MatrixXd& h) {
  const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  Eigen::VectorXd values = eig.eigenvalues().cwiseAbs();
  const double floor = std::max(values.maxCoeff() * 1e-10, 1e-12);
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = 1.0 / std::max(values(i), floor);
  return eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

OptimizerResult minimize_bfgs(const Objective& f, const Eigen::VectorXd& x0,
                              const OptimizerOptions& options, const HessianFn& hessian) {
  OptimizerResult res;
  res.x = x0;
  res.gradient = Eigen::VectorXd::Zero(x0.size());
  res.value = f(res.x, &res.gradient);
  if (!std::isfinite(res.value) || !all_finite(res.gradient)) {
    res.message = "infeasible starting point";
    return res;
  }

  const auto n = x0.size();
  auto fresh_metric = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& g) -> Eigen::MatrixXd {
    if (hessian) {
      const Eigen::MatrixXd h = hessian(x);
      if (h.allFinite()) return floored_inverse(h);
    }
    return Eigen::MatrixXd::Identity(n, n) / std::max(1.0, g.lpNorm<Eigen::Infinity>());
  };

  Eigen::MatrixXd inv_h = fresh_metric(res.x, res.gradient);
  int refreshes = 0;
  bool metric_is_fresh = true;
  Eigen::VectorXd trial_grad(n);

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    const double scale = std::max(1.0, std::abs(res.value));
    if (res.gradient.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance * scale) {
      res.converged = true;
      res.message = "gradient tolerance reached";
      return res;
    }

    Eigen::VectorXd direction = -inv_h * res.gradient;
    double slope = res.gradient.dot(direction);
    if (!(slope < 0.0)) {
      inv_h = Eigen::MatrixXd::Identity(n, n) / std::max(1.0, res.gradient.lpNorm<Eigen::Infinity>());
      direction = -inv_h * res.gradient;
      slope = res.gradient.dot(direction);
    }

    double step = 1.0;
    double trial_value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd trial_x;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      trial_x = res.x + step * direction;
      trial_value = f(trial_x, &trial_grad);
      if (std::isfinite(trial_value) && all_finite(trial_grad) &&
          trial_value <= res.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= std::isfinite(trial_value) ? 0.5 : 0.25;
    }

    if (!accepted) {
      if (!metric_is_fresh && refreshes < options.max_metric_refreshes) {
        inv_h = fresh_metric(res.x, res.gradient);
        ++refreshes;
        metric_is_fresh = true;
        continue;
      }
      res.message = "line search failed";
      return res;
    }

    const Eigen::VectorXd s = trial_x - res.x;
    const Eigen::VectorXd y = trial_grad - res.gradient;
    res.x = trial_x;
    res.value = trial_value;
    res.gradient = trial_grad;
    metric_is_fresh = false;

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = inv_h * y;
      inv_h += ((sy + y.dot(hy)) * rho * rho) * (s * s.transpose()) -
               rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  res.message = "iteration limit reached";
  const double scale = std::max(1.0, std::abs(res.value));
  res.converged = res.gradient.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance * scale;
  return res;
}

}  // namespace nsgev
