#include "nsgev/nonstationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "nsgev/error.hpp"
#include "nsgev/kernels.hpp"
#include "nsgev/optimize.hpp"
#include "nsgev/stationary.hpp"

namespace nsgev {
namespace {

constexpr std::size_t kMinSeasonalRecords = 60;
constexpr std::size_t kMinTensorRecords = 120;
constexpr std::size_t kMinTensorYears = 10;

struct PreparedData {
  std::vector<DesignPoint> points;
  std::vector<double> maxima;
  BasisSpec spec;
};

PreparedData prepare(const BlockMaximaSeries& series, ModelKind kind, const BasisSpec& requested) {
  if (kind == ModelKind::stationary) throw DomainError("use fit_stationary for stationary models");
  if (series.kind != BlockKind::monthly) throw DomainError("seasonal and tensor models need monthly maxima");
  PreparedData d;
  for (const auto& r : series.included()) {
    d.points.push_back({r.year, r.month});
    d.maxima.push_back(r.maximum);
  }
  std::set<int> years;
  for (const auto& p : d.points) years.insert(p.year);
  if (kind == ModelKind::seasonal && d.points.size() < kMinSeasonalRecords) {
    throw DataSizeError("seasonal model needs at least " + std::to_string(kMinSeasonalRecords) +
                        " included monthly maxima, got " + std::to_string(d.points.size()));
  }
  if (kind == ModelKind::tensor &&
      (d.points.size() < kMinTensorRecords || years.size() < kMinTensorYears)) {
    throw DataSizeError("tensor model needs at least " + std::to_string(kMinTensorRecords) +
                        " included monthly maxima over " + std::to_string(kMinTensorYears) +
                        " distinct years, got " + std::to_string(d.points.size()) + " over " +
                        std::to_string(years.size()));
  }
  d.spec = requested;
  if (d.spec.first_year == 0 && d.spec.last_year == 0) {
    d.spec.first_year = *years.begin();
    d.spec.last_year = *years.rbegin();
  } else if (*years.begin() < d.spec.first_year || *years.rbegin() > d.spec.last_year) {
    throw ExtrapolationError("maxima fall outside the configured year window");
  }
  return d;
}

Eigen::VectorXd initial_theta(const GevRegression& reg, std::span<const double> maxima) {
  const std::size_t p = reg.coefficients_per_surface();
  const XiBounds& b = reg.bounds();
  const GevParams init = lmoments_init(maxima);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * p + 1));
  theta(0) = init.mu;
  theta(static_cast<Eigen::Index>(p)) = std::log(init.sigma);
  const double margin = 1e-3 * (b.upper - b.lower);
  theta(static_cast<Eigen::Index>(2 * p)) = b.eta(std::clamp(init.xi, b.lower + margin, b.upper - margin));
  if (!std::isfinite(reg.objective(theta, nullptr))) theta(static_cast<Eigen::Index>(2 * p)) = b.eta(0.0);
  return theta;
}

std::vector<double> sorted_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("smoothing grid is empty");
  std::vector<double> g = grid;
  for (double v : g) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("smoothing grid values must be positive and finite");
  }
  std::sort(g.begin(), g.end(), std::greater<>());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int i = 0; i < 15; ++i) g.push_back(std::pow(10.0, -4.0 + 8.0 * i / 14.0));
  return g;
}

double aicc(double loglik, double edf, std::size_t n) {
  const double nn = static_cast<double>(n);
  if (!(nn - edf - 1.0 > 0.0) || !std::isfinite(loglik)) return std::numeric_limits<double>::infinity();
  return -2.0 * loglik + 2.0 * edf * nn / (nn - edf - 1.0);
}

FittedModel fit_with_lambdas(const BlockMaximaSeries& maxima, ModelKind kind, const BasisSpec& spec,
                             Lambdas lambdas, const FitOptions& options, const FittedModel* warm_start) {
  if (!(lambdas.month >= 0.0) || !(lambdas.year >= 0.0)) throw DomainError("smoothing parameters must be >= 0");
  PreparedData data = prepare(maxima, kind, spec);

  FittedModel fit;
  fit.kind = kind;
  fit.spec = data.spec;
  fit.xi_bounds = options.xi_bounds;
  fit.lambdas = lambdas;
  fit.n = data.points.size();
  fit.data_fingerprint = fingerprint(maxima);
  if (warm_start && warm_start->basis && warm_start->kind == kind && warm_start->spec == data.spec) {
    fit.basis = warm_start->basis;
  } else {
    fit.basis = std::make_shared<const SurfaceBasis>(kind, data.spec);
  }
  const SurfaceBasis& basis = *fit.basis;
  const Eigen::MatrixXd penalty = lambdas.month * basis.month_penalty() + lambdas.year * basis.year_penalty();
  const GevRegression reg(basis.design(data.points), data.maxima, penalty, options.xi_bounds);
  const std::size_t p = basis.size();
  const auto pi = static_cast<Eigen::Index>(p);

  Eigen::VectorXd theta;
  if (warm_start && warm_start->beta_mu.size() == p && warm_start->kind == kind &&
      warm_start->xi > options.xi_bounds.lower && warm_start->xi < options.xi_bounds.upper) {
    theta.resize(2 * pi + 1);
    for (Eigen::Index j = 0; j < pi; ++j) {
      theta(j) = warm_start->beta_mu[static_cast<std::size_t>(j)];
      theta(pi + j) = warm_start->beta_logsigma[static_cast<std::size_t>(j)];
    }
    theta(2 * pi) = options.xi_bounds.eta(warm_start->xi);
    if (!std::isfinite(reg.objective(theta, nullptr))) theta = initial_theta(reg, data.maxima);
  } else {
    theta = initial_theta(reg, data.maxima);
  }

  OptimizerOptions opt;
  opt.gradient_tolerance = options.gradient_tolerance;
  opt.max_iterations = options.max_iterations;
  const OptimizerResult r = minimize_bfgs(
      [&](const Eigen::VectorXd& t, Eigen::VectorXd* g) { return reg.objective(t, g); }, theta, opt,
      [&](const Eigen::VectorXd& t) { return reg.hessian(t); });

  fit.converged = r.converged;
  fit.iterations = r.iterations;
  fit.beta_mu.assign(r.x.data(), r.x.data() + p);
  fit.beta_logsigma.assign(r.x.data() + p, r.x.data() + 2 * p);
  fit.xi = options.xi_bounds.xi(r.x(2 * pi));
  fit.penalized_loglik = -r.value;
  fit.loglik = reg.loglik(r.x);
  fit.design_points = std::move(data.points);

  const Eigen::MatrixXd unpenalized = reg.information(r.x, false);
  Eigen::MatrixXd penalized = unpenalized;
  penalized.block(0, 0, pi, pi) += penalty;
  penalized.block(pi, pi, pi, pi) += penalty;
  fit.penalized_hessian = penalized;
  if (penalized.allFinite()) {
    const Eigen::MatrixXd influence = penalized.ldlt().solve(unpenalized);
    fit.edf = influence.trace();
    fit.edf_year = 0.0;
    for (std::size_t c : basis.year_columns()) {
      const auto ci = static_cast<Eigen::Index>(c);
      fit.edf_year += influence(ci, ci) + influence(pi + ci, pi + ci);
    }
  } else {
    fit.edf = std::numeric_limits<double>::quiet_NaN();
    fit.edf_year = std::numeric_limits<double>::quiet_NaN();
    fit.converged = false;
  }
  return fit;
}

SmoothingSelection select_smoothing(const BlockMaximaSeries& maxima, ModelKind kind, const BasisSpec& spec,
                                    const FitOptions& options) {
  const std::vector<double> grid = sorted_grid(options.lambda_grid);
  const int g = static_cast<int>(grid.size());
  const bool two_way = kind == ModelKind::tensor;

  struct Cell {
    SelectionEntry entry;
    FittedModel model;
  };
  std::map<std::pair<int, int>, Cell> cache;
  SmoothingSelection out;

  auto evaluate = [&](int i, int j, const FittedModel* warm) -> const Cell& {
    const auto key = std::pair{i, j};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const Lambdas l{grid[static_cast<std::size_t>(i)], two_way ? grid[static_cast<std::size_t>(j)] : 0.0};
    Cell cell;
    cell.model = fit_with_lambdas(maxima, kind, spec, l, options, warm);
    cell.entry.lambdas = l;
    cell.entry.loglik = cell.model.loglik;
    cell.entry.edf = cell.model.edf;
    cell.entry.converged = cell.model.converged;
    cell.entry.aicc = cell.model.converged ? aicc(cell.model.loglik, cell.model.edf, cell.model.n)
                                           : std::numeric_limits<double>::infinity();
    out.trace.push_back(cell.entry);
    return cache.emplace(key, std::move(cell)).first->second;
  };

  // Sweep one coordinate of the grid with the other held, warm-starting
  // each fit from the previous one; returns the AICc-minimizing index.
  auto sweep = [&](int fixed, bool over_month, int current) {
    const FittedModel* warm = nullptr;
    const auto start = over_month ? std::pair{current, fixed} : std::pair{fixed, current};
    if (auto it = cache.find(start); it != cache.end()) warm = &it->second.model;
    int best = current;
    double best_score = std::numeric_limits<double>::infinity();
    for (int k = 0; k < g; ++k) {
      const Cell& c = over_month ? evaluate(k, fixed, warm) : evaluate(fixed, k, warm);
      if (c.entry.converged) warm = &c.model;
      if (c.entry.aicc < best_score) {
        best_score = c.entry.aicc;
        best = k;
      }
    }
    return best;
  };

  int bi = 0;
  int bj = 0;
  if (!two_way) {
    bi = sweep(0, true, 0);
  } else {
    for (int round = 0; round < 4; ++round) {
      const auto before = std::pair{bi, bj};
      bi = sweep(bj, true, bi);
      bj = sweep(bi, false, bj);
      if (round > 0 && std::pair{bi, bj} == before) break;
    }
  }

  const Cell& chosen = cache.at({bi, two_way ? bj : 0});
  if (!chosen.entry.converged) {
    std::string diag;
    for (const auto& e : out.trace) {
      diag += " [month=" + std::to_string(e.lambdas.month) + " year=" + std::to_string(e.lambdas.year) +
              (e.converged ? " ok]" : " failed]");
    }
    throw ConvergenceError("no smoothing candidate converged:" + diag);
  }
  out.chosen = chosen.entry.lambdas;
  out.model = chosen.model;
  return out;
}

FittedModel fit_seasonal(const BlockMaximaSeries& maxima, const BasisSpec& spec, const FitOptions& options) {
  return select_smoothing(maxima, ModelKind::seasonal, spec, options).model;
}

FittedModel fit_tensor(const BlockMaximaSeries& maxima, const BasisSpec& spec, const FitOptions& options) {
  return select_smoothing(maxima, ModelKind::tensor, spec, options).model;
}

FittedModel refit_at_design(const FittedModel& model, std::span<const double> maxima, const FitOptions& options) {
  if (maxima.size() != model.design_points.size()) throw DomainError("refit data does not match the design");
  BlockMaximaSeries series;
  series.kind = BlockKind::monthly;
  series.records.reserve(maxima.size());
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    series.records.push_back({model.design_points[i].year, model.design_points[i].month, maxima[i], 1.0, false});
  }
  FitOptions opts = options;
  opts.xi_bounds = model.xi_bounds;
  return fit_with_lambdas(series, model.kind, model.spec, model.lambdas, opts, &model);
}

void attach_basis(FittedModel& model) { model.basis = std::make_shared<const SurfaceBasis>(model.kind, model.spec); }

GevParams predict_params(const FittedModel& model, int month, int year) {
  if (!model.basis) throw DomainError("fitted model has no basis attached");
  if (month < 1 || month > 12) throw DomainError("month must lie in 1..12");
  const auto row = model.basis->row(month, year);
  GevParams p;
  p.mu = kernels::dot(row, model.beta_mu);
  p.sigma = std::exp(kernels::dot(row, model.beta_logsigma));
  p.xi = model.xi;
  return p;
}

std::pair<int, int> year_range(const FittedModel& model) { return {model.spec.first_year, model.spec.last_year}; }

}  // namespace nsgev
