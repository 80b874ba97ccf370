#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace nsgev {

// Objective to minimize. Returns +inf for infeasible points (line searches
// retreat from them). When `grad` is non-null it must be filled at finite points.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;
// Hessian of the objective, used to seed and refresh the quasi-Newton metric.
using HessianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd& x)>;

struct OptimizerOptions {
  int max_iterations = 500;
  // Converged when ||grad||_inf <= gradient_tolerance * max(1, |f|).
  double gradient_tolerance = 1e-6;
  int max_metric_refreshes = 8;
};

struct OptimizerResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
  std::string message;
};

// BFGS on the inverse Hessian with Armijo backtracking. With `hessian`, the
// initial metric is the (eigenvalue-floored) inverse Hessian at x0 and it is
// rebuilt whenever the line search stalls.
OptimizerResult minimize_bfgs(const Objective& f, const Eigen::VectorXd& x0,
                              const OptimizerOptions& options = {}, const HessianFn& hessian = {});

}  // namespace nsgev
