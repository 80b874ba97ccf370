#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nsgev/optimize.hpp"

using namespace nsgev;

TEST(Bfgs, Rosenbrock) {
  const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    const double a = 1.0 - x(0);
    const double b = x(1) - x(0) * x(0);
    if (g) {
      g->resize(2);
      (*g)(0) = -2.0 * a - 400.0 * x(0) * b;
      (*g)(1) = 200.0 * b;
    }
    return a * a + 100.0 * b * b;
  };
  OptimizerOptions opts;
  opts.max_iterations = 2000;
  opts.gradient_tolerance = 1e-10;
  const auto r = minimize_bfgs(f, Eigen::Vector2d(-1.2, 1.0), opts);
  EXPECT_TRUE(r.converged) << r.message;
  EXPECT_NEAR(r.x(0), 1.0, 1e-6);
  EXPECT_NEAR(r.x(1), 1.0, 1e-6);
}

TEST(Bfgs, RetreatsFromInfeasibleRegion) {
  // Minimum at x = 0.5 next to a wall at x = 1 where the objective is +inf.
  const Objective f = [](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (x(0) >= 1.0) return std::numeric_limits<double>::infinity();
    const double v = -std::log(1.0 - x(0)) - 2.0 * x(0);
    if (g) {
      g->resize(1);
      (*g)(0) = 1.0 / (1.0 - x(0)) - 2.0;
    }
    return v;
  };
  const auto r = minimize_bfgs(f, Eigen::VectorXd::Constant(1, -5.0));
  EXPECT_TRUE(r.converged) << r.message;
  EXPECT_NEAR(r.x(0), 0.5, 1e-6);
}

TEST(Bfgs, UsesHessianMetric) {
  const Eigen::Matrix3d A = (Eigen::Matrix3d() << 100, 1, 0, 1, 2, 0.5, 0, 0.5, 1).finished();
  const Eigen::Vector3d b(1, -2, 0.3);
  const Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    if (g) *g = A * x - b;
    return 0.5 * x.dot(A * x) - b.dot(x);
  };
  const HessianFn h = [&](const Eigen::VectorXd&) { return Eigen::MatrixXd(A); };
  OptimizerOptions opts;
  opts.gradient_tolerance = 1e-12;
  const auto r = minimize_bfgs(f, Eigen::Vector3d::Zero(), opts, h);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x - A.ldlt().solve(b)).norm(), 1e-8);
  EXPECT_LE(r.iterations, 5);
}
