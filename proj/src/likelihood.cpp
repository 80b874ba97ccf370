#include "nsgev/likelihood.hpp"

#include <cmath>
#include <limits>

#include "nsgev/error.hpp"
#include "nsgev/gev.hpp"
#include "nsgev/kernels.hpp"

namespace nsgev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHessianStep = 1e-5;

double logistic(double eta) {
  return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

// Central differences of the analytic per-point gradient in (mu, log sigma, xi);
// one-sided on a side that leaves the support.
bool point_hessian(double x, const double (&at)[3], const double (&g0)[3], double (&h)[3][3]) {
  for (int j = 0; j < 3; ++j) {
    double plus[3] = {at[0], at[1], at[2]};
    double minus[3] = {at[0], at[1], at[2]};
    plus[j] += kHessianStep;
    minus[j] -= kHessianStep;
    double gp[3];
    double gm[3];
    const bool ok_p = gev_logpdf_grad_raw(x, plus[0], plus[1], plus[2], gp) != kNegInf;
    const bool ok_m = gev_logpdf_grad_raw(x, minus[0], minus[1], minus[2], gm) != kNegInf;
    for (int i = 0; i < 3; ++i) {
      if (ok_p && ok_m) {
        h[i][j] = (gp[i] - gm[i]) / (2.0 * kHessianStep);
      } else if (ok_p) {
        h[i][j] = (gp[i] - g0[i]) / kHessianStep;
      } else if (ok_m) {
        h[i][j] = (g0[i] - gm[i]) / kHessianStep;
      } else {
        return false;
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < i; ++j) h[i][j] = h[j][i] = 0.5 * (h[i][j] + h[j][i]);
  }
  return true;
}

}  // namespace

double XiBounds::xi(double eta) const { return lower + (upper - lower) * logistic(eta); }

double XiBounds::eta(double xi) const {
  const double r = (xi - lower) / (upper - lower);
  if (!(r > 0.0 && r < 1.0)) throw DomainError("shape parameter outside its admissible interval");
  return std::log(r / (1.0 - r));
}

double XiBounds::jacobian(double eta) const {
  const double s = logistic(eta);
  return (upper - lower) * s * (1.0 - s);
}

double XiBounds::curvature(double eta) const {
  const double s = logistic(eta);
  return (upper - lower) * s * (1.0 - s) * (1.0 - 2.0 * s);
}

GevRegression::GevRegression(DesignMatrix design, std::vector<double> response, Eigen::MatrixXd penalty,
                             XiBounds bounds)
    : design_(std::move(design)), response_(std::move(response)), penalty_(std::move(penalty)), bounds_(bounds) {
  if (design_.rows != response_.size()) throw DomainError("design rows and response length differ");
  if (design_.rows == 0) throw DataSizeError("no observations to fit");
  const auto p = static_cast<Eigen::Index>(design_.cols);
  if (penalty_.size() == 0) penalty_ = Eigen::MatrixXd::Zero(p, p);
  if (penalty_.rows() != p || penalty_.cols() != p) throw DomainError("penalty matrix has the wrong shape");
  if (!(bounds_.lower < bounds_.upper)) throw DomainError("empty shape-parameter interval");
}

void GevRegression::linear_predictors(const Eigen::VectorXd& theta, std::vector<double>& mu,
                                      std::vector<double>& log_sigma) const {
  const std::size_t p = design_.cols;
  mu.resize(design_.rows);
  log_sigma.resize(design_.rows);
  kernels::gemv(design_.values, design_.rows, p, {theta.data(), p}, mu);
  kernels::gemv(design_.values, design_.rows, p, {theta.data() + p, p}, log_sigma);
}

double GevRegression::penalty_value(const Eigen::VectorXd& theta) const {
  const auto p = static_cast<Eigen::Index>(design_.cols);
  const auto bm = theta.segment(0, p);
  const auto bs = theta.segment(p, p);
  return 0.5 * (bm.dot(penalty_ * bm) + bs.dot(penalty_ * bs));
}

double GevRegression::objective(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  const std::size_t p = design_.cols;
  const std::size_t n = design_.rows;
  const double eta = theta(static_cast<Eigen::Index>(2 * p));
  const double xi = bounds_.xi(eta);
  std::vector<double> mu;
  std::vector<double> log_sigma;
  linear_predictors(theta, mu, log_sigma);

  std::vector<double> w_mu(grad ? n : 0);
  std::vector<double> w_sigma(grad ? n : 0);
  double score_xi = 0.0;
  double total = 0.0;
  double g[3];
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = gev_logpdf_grad_raw(response_[i], mu[i], log_sigma[i], xi, g);
    if (lp == kNegInf || !std::isfinite(lp)) return kInf;
    total += lp;
    if (grad) {
      w_mu[i] = -g[0];
      w_sigma[i] = -g[1];
      score_xi += g[2];
    }
  }
  const double value = -total + penalty_value(theta);
  if (grad) {
    grad->resize(static_cast<Eigen::Index>(2 * p + 1));
    kernels::gemv_t(design_.values, n, p, w_mu, {grad->data(), p});
    kernels::gemv_t(design_.values, n, p, w_sigma, {grad->data() + p, p});
    const auto pi = static_cast<Eigen::Index>(p);
    grad->segment(0, pi) += penalty_ * theta.segment(0, pi);
    grad->segment(pi, pi) += penalty_ * theta.segment(pi, pi);
    (*grad)(2 * pi) = -score_xi * bounds_.jacobian(eta);
  }
  return value;
}

double GevRegression::loglik(const Eigen::VectorXd& theta) const {
  const double penalized = objective(theta, nullptr);
  if (!std::isfinite(penalized)) return kNegInf;
  return -(penalized - penalty_value(theta));
}

GevRegression::Curvature GevRegression::curvature(const Eigen::VectorXd& theta) const {
  const std::size_t p = design_.cols;
  const std::size_t n = design_.rows;
  const auto pi = static_cast<Eigen::Index>(p);
  const double xi = bounds_.xi(theta(2 * pi));
  std::vector<double> mu;
  std::vector<double> log_sigma;
  linear_predictors(theta, mu, log_sigma);

  std::vector<double> w00(n), w01(n), w11(n), w02(n), w12(n);
  double h22 = 0.0;
  double score_xi = 0.0;
  Curvature out;
  out.natural = Eigen::MatrixXd::Constant(2 * pi + 1, 2 * pi + 1, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    double g[3];
    if (gev_logpdf_grad_raw(response_[i], mu[i], log_sigma[i], xi, g) == kNegInf) return out;
    const double at[3] = {mu[i], log_sigma[i], xi};
    const double g0[3] = {g[0], g[1], g[2]};
    double h[3][3];
    if (!point_hessian(response_[i], at, g0, h)) return out;
    w00[i] = -h[0][0];
    w01[i] = -h[0][1];
    w11[i] = -h[1][1];
    w02[i] = -h[0][2];
    w12[i] = -h[1][2];
    h22 -= h[2][2];
    score_xi += g[2];
  }

  std::vector<double> gram(p * p);
  auto put_block = [&](Eigen::Index r0, Eigen::Index c0) {
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        gram.data(), pi, pi);
    out.natural.block(r0, c0, pi, pi) = m;
    if (r0 != c0) out.natural.block(c0, r0, pi, pi) = m.transpose();
  };
  kernels::weighted_gram(design_.values, n, p, w00, gram);
  put_block(0, 0);
  kernels::weighted_gram(design_.values, n, p, w01, gram);
  put_block(0, pi);
  kernels::weighted_gram(design_.values, n, p, w11, gram);
  put_block(pi, pi);

  std::vector<double> col(p);
  kernels::gemv_t(design_.values, n, p, w02, col);
  for (Eigen::Index j = 0; j < pi; ++j) out.natural(j, 2 * pi) = out.natural(2 * pi, j) = col[static_cast<std::size_t>(j)];
  kernels::gemv_t(design_.values, n, p, w12, col);
  for (Eigen::Index j = 0; j < pi; ++j) {
    out.natural(pi + j, 2 * pi) = out.natural(2 * pi, pi + j) = col[static_cast<std::size_t>(j)];
  }
  out.natural(2 * pi, 2 * pi) = h22;
  out.score_xi = score_xi;
  return out;
}

Eigen::MatrixXd GevRegression::information(const Eigen::VectorXd& theta, bool penalized) const {
  Eigen::MatrixXd info = curvature(theta).natural;
  if (penalized) {
    const auto pi = static_cast<Eigen::Index>(design_.cols);
    info.block(0, 0, pi, pi) += penalty_;
    info.block(pi, pi, pi, pi) += penalty_;
  }
  return info;
}

Eigen::MatrixXd GevRegression::hessian(const Eigen::VectorXd& theta) const {
  const Curvature c = curvature(theta);
  const auto pi = static_cast<Eigen::Index>(design_.cols);
  const double eta = theta(2 * pi);
  const double jac = bounds_.jacobian(eta);
  Eigen::MatrixXd h = c.natural;
  h.block(0, 0, pi, pi) += penalty_;
  h.block(pi, pi, pi, pi) += penalty_;
  h.col(2 * pi) *= jac;
  h.row(2 * pi) *= jac;
  h(2 * pi, 2 * pi) += -c.score_xi * bounds_.curvature(eta);
  return h;
}

}  // namespace nsgev
