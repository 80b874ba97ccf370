#pragma once

// Penalized GEV regression likelihood shared by every fitted model:
//
//   mu_i = x_i . beta_mu,  log sigma_i = x_i . beta_logsigma,  xi common,
//
// with xi = lo + (hi - lo) * logistic(eta) during optimization. The
// stationary model is the one-column (intercept only) case. Parameter
// vectors are laid out as theta = [beta_mu | beta_logsigma | eta].

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "nsgev/spline.hpp"

namespace nsgev {

struct XiBounds {
  double lower = -0.5;
  double upper = 1.0;

  [[nodiscard]] double xi(double eta) const;
  [[nodiscard]] double eta(double xi) const;
  // d xi / d eta and d^2 xi / d eta^2
  [[nodiscard]] double jacobian(double eta) const;
  [[nodiscard]] double curvature(double eta) const;
};

class GevRegression {
 public:
  // `penalty` is the already lambda-weighted p x p matrix applied to both
  // surfaces; pass an empty matrix for an unpenalized fit.
  GevRegression(DesignMatrix design, std::vector<double> response, Eigen::MatrixXd penalty,
                XiBounds bounds);

  [[nodiscard]] std::size_t coefficients_per_surface() const { return design_.cols; }
  [[nodiscard]] std::size_t dimension() const { return 2 * design_.cols + 1; }
  [[nodiscard]] std::size_t observations() const { return design_.rows; }
  [[nodiscard]] const XiBounds& bounds() const { return bounds_; }
  [[nodiscard]] const DesignMatrix& design() const { return design_; }

  // Negative penalized log-likelihood in theta coordinates; +inf outside the support.
  double objective(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const;
  [[nodiscard]] double loglik(const Eigen::VectorXd& theta) const;
  [[nodiscard]] double penalty_value(const Eigen::VectorXd& theta) const;
  // Hessian of objective() in theta coordinates.
  [[nodiscard]] Eigen::MatrixXd hessian(const Eigen::VectorXd& theta) const;
  // Observed information (negative Hessian of the log-likelihood, optionally
  // penalized) in natural coordinates [beta_mu | beta_logsigma | xi].
  [[nodiscard]] Eigen::MatrixXd information(const Eigen::VectorXd& theta, bool penalized) const;

 private:
  struct Curvature {
    Eigen::MatrixXd natural;  // information of the unpenalized log-likelihood
    double score_xi = 0.0;    // d loglik / d xi
  };
  [[nodiscard]] Curvature curvature(const Eigen::VectorXd& theta) const;
  void linear_predictors(const Eigen::VectorXd& theta, std::vector<double>& mu,
                         std::vector<double>& log_sigma) const;

  DesignMatrix design_;
  std::vector<double> response_;
  Eigen::MatrixXd penalty_;
  XiBounds bounds_;
};

}  // namespace nsgev
