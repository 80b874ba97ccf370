#include <gtest/gtest.h>

#include <cmath>

#include "nsgev/error.hpp"
#include "nsgev/stationary.hpp"
#include "support.hpp"

using namespace nsgev;

TEST(LMoments, GumbelShapeNearZero) {
  const auto xs = gev_sample({0, 1, 0}, 10000, 77);
  EXPECT_NEAR(lmoments_init(xs).xi, 0.0, 0.05);
}

TEST(LMoments, ScaleEquivariance) {
  auto xs = gev_sample({3, 2, 0.1}, 500, 4);
  const GevParams a = lmoments_init(xs);
  for (auto& x : xs) x *= 2.5;
  const GevParams b = lmoments_init(xs);
  EXPECT_NEAR(b.mu, 2.5 * a.mu, 1e-10);
  EXPECT_NEAR(b.sigma, 2.5 * a.sigma, 1e-10);
  EXPECT_NEAR(b.xi, a.xi, 1e-12);
}

TEST(LMoments, Errors) {
  const std::vector<double> flat(10, 3.0);
  EXPECT_THROW((void)lmoments_init(flat), DegenerateError);
  const std::vector<double> four{1, 2, 3, 4};
  EXPECT_THROW((void)lmoments_init(four), DataSizeError);
}

TEST(LMoments, ShapeClamped) {
  std::vector<double> xs = gev_sample({0, 1, 0.9}, 2000, 8);
  const GevParams p = lmoments_init(xs);
  EXPECT_LE(p.xi, 0.5);
  EXPECT_GT(p.sigma, 0.0);
}

TEST(FitMle, RecoversParametersAndAscends) {
  const auto xs = gev_sample({5, 1, 0.1}, 1000, 21);
  const StationaryFit fit = fit_gev_mle(xs);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.params.mu, 5.0, 0.15);
  EXPECT_NEAR(fit.params.sigma, 1.0, 0.1);
  EXPECT_NEAR(fit.params.xi, 0.1, 0.08);
  EXPECT_GE(fit.loglik, gev_loglik(lmoments_init(xs), xs));
  EXPECT_EQ(fit.n, 1000u);
  // Covariance symmetric positive definite.
  EXPECT_LT((fit.cov - fit.cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(fit.cov);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(FitMle, LocationScaleEquivariance) {
  const auto xs = gev_sample({2, 0.7, -0.1}, 300, 5);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * x + 1.0);
  const StationaryFit a = fit_gev_mle(xs);
  const StationaryFit b = fit_gev_mle(ys);
  EXPECT_NEAR(b.params.mu, 3.0 * a.params.mu + 1.0, 1e-4);
  EXPECT_NEAR(b.params.sigma, 3.0 * a.params.sigma, 1e-4);
  EXPECT_NEAR(b.params.xi, a.params.xi, 1e-4);
}

TEST(FitMle, SelfConsistency) {
  const auto xs = gev_sample({1, 1, 0.05}, 2000, 9);
  const StationaryFit a = fit_gev_mle(xs);
  const StationaryFit b = fit_gev_mle(gev_sample(a.params, 2000, 10));
  const double se_mu = std::sqrt(a.cov(0, 0));
  EXPECT_NEAR(b.params.mu, a.params.mu, 4.0 * se_mu);
}

TEST(FitMle, TooFewPoints) {
  const std::vector<double> xs{1, 2, 3, 4};
  EXPECT_THROW((void)fit_gev_mle(xs), DataSizeError);
}

TEST(ReturnLevel, ClosedForms) {
  StationaryFit fit;
  fit.params = {0, 1, 0};
  fit.converged = true;
  fit.cov = Eigen::Matrix3d::Identity() * 0.01;
  EXPECT_NEAR(return_level_stationary(fit, 100).level, 4.60014922677657999772294640092, 1e-12);
  EXPECT_NEAR(return_level_stationary(fit, 2).level, 0.366512920581664327012439158233, 1e-12);
}

TEST(ReturnLevel, IntervalWidensAndLevelIncreases) {
  const auto xs = gev_sample({5, 1, 0.1}, 60, 3);
  const StationaryFit fit = fit_gev_mle(xs);
  double prev_level = -1e300;
  double prev_width = 0.0;
  for (double n : {2.0, 5.0, 10.0, 50.0, 100.0, 500.0}) {
    const LevelEstimate e = return_level_stationary(fit, n);
    EXPECT_GT(e.level, prev_level);
    EXPECT_GT(e.upper - e.lower, prev_width);
    EXPECT_LE(e.lower, e.level);
    EXPECT_GE(e.upper, e.level);
    prev_level = e.level;
    prev_width = e.upper - e.lower;
  }
}

TEST(ReturnLevel, RefusesNonConverged) {
  StationaryFit fit;
  fit.converged = false;
  EXPECT_THROW((void)return_level_stationary(fit, 100), DomainError);
  fit.converged = true;
  EXPECT_THROW((void)return_level_stationary(fit, 1.0), DomainError);
}

TEST(QuantileGradient, MatchesFiniteDifferences) {
  for (double xi : {-0.3, -1e-7, 0.0, 2e-9, 0.25}) {
    const GevParams p{1.0, 1.5, xi};
    const double prob = 0.99;
    const Eigen::Vector3d g = quantile_gradient(prob, p);
    const double h = 1e-6;
    const double ls = std::log(p.sigma);
    auto q = [&](double mu, double lsig, double x) { return gev_quantile(prob, {mu, std::exp(lsig), x}); };
    EXPECT_NEAR(g(0), (q(p.mu + h, ls, xi) - q(p.mu - h, ls, xi)) / (2 * h), 1e-6);
    EXPECT_NEAR(g(1), (q(p.mu, ls + h, xi) - q(p.mu, ls - h, xi)) / (2 * h), 1e-6);
    EXPECT_NEAR(g(2), (q(p.mu, ls, xi + h) - q(p.mu, ls, xi - h)) / (2 * h), 1e-4);
  }
}
