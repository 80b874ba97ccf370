#include "nsgev/gev.hpp"

#include <cmath>

#include "nsgev/error.hpp"
#include "nsgev/random.hpp"

namespace nsgev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double effective_xi(double xi) { return std::abs(xi) < kGumbelThreshold ? 0.0 : xi; }

// log1p(u) / u, continuous through u = 0.
double log1p_ratio(double u) {
  if (std::abs(u) < 1e-4) {
    return 1.0 - u * (0.5 - u * (1.0 / 3.0 - u * 0.25));
  }
  return std::log1p(u) / u;
}

// (log1p(u) - u / (1 + u)) / u^2 = sum_{k>=2} (-1)^k (k-1)/k u^(k-2)
double log1p_curvature(double u) {
  if (std::abs(u) < 1e-3) {
    double acc = 0.0;
    double power = 1.0;
    for (int k = 2; k <= 8; ++k) {
      const double term = static_cast<double>(k - 1) / k * power;
      acc += (k % 2 == 0) ? term : -term;
      power *= u;
    }
    return acc;
  }
  return (std::log1p(u) - u / (1.0 + u)) / (u * u);
}

// Standardized reduced variate: returns false when x is outside the open
// support. On success writes log t(x) where F = exp(-t).
bool log_t(double z, double xi, double* out) {
  if (xi == 0.0) {
    *out = -z;
    return true;
  }
  const double u = xi * z;
  if (!(u > -1.0)) return false;
  *out = -z * log1p_ratio(u);
  return true;
}

}  // namespace

void validate(const GevParams& p) {
  if (!std::isfinite(p.mu) || !std::isfinite(p.sigma) || !std::isfinite(p.xi)) {
    throw DomainError("GEV parameters must be finite");
  }
  if (!(p.sigma > 0.0)) throw DomainError("GEV scale must be positive");
}

double lower_support_bound(const GevParams& p) {
  const double xi = effective_xi(p.xi);
  return xi > 0.0 ? p.mu - p.sigma / xi : -kInf;
}

double upper_support_bound(const GevParams& p) {
  const double xi = effective_xi(p.xi);
  return xi < 0.0 ? p.mu - p.sigma / xi : kInf;
}

bool in_support(double x, const GevParams& p) {
  const double xi = effective_xi(p.xi);
  return xi == 0.0 || 1.0 + xi * (x - p.mu) / p.sigma > 0.0;
}

double gev_log_cdf(double x, const GevParams& p) {
  validate(p);
  const double xi = effective_xi(p.xi);
  const double z = (x - p.mu) / p.sigma;
  double lt = 0.0;
  if (!log_t(z, xi, &lt)) return xi > 0.0 ? kNegInf : 0.0;
  return -std::exp(lt);
}

double gev_cdf(double x, const GevParams& p) { return std::exp(gev_log_cdf(x, p)); }

double gev_logpdf(double x, const GevParams& p) {
  validate(p);
  const double xi = effective_xi(p.xi);
  const double z = (x - p.mu) / p.sigma;
  double lt = 0.0;
  if (!log_t(z, xi, &lt)) return kNegInf;
  // log f = -log sigma - (1 + 1/xi) log(1 + xi z) - t, and
  // (1 + 1/xi) log(1 + u) = log1p(u) - log t.
  const double log_w = xi == 0.0 ? 0.0 : std::log1p(xi * z);
  return -std::log(p.sigma) - log_w + lt - std::exp(lt);
}

double gev_quantile(double prob, const GevParams& p) {
  validate(p);
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("quantile probability must lie in (0, 1)");
  const double xi = effective_xi(p.xi);
  const double log_t_val = std::log(-std::log(prob));
  if (xi == 0.0) return p.mu - p.sigma * log_t_val;
  return p.mu + p.sigma * std::expm1(-xi * log_t_val) / xi;
}

double gev_loglik(const GevParams& p, std::span<const double> sample) {
  validate(p);
  if (sample.empty()) throw DomainError("log-likelihood of an empty sample");
  double total = 0.0;
  for (double x : sample) {
    if (!std::isfinite(x)) throw DomainError("sample contains a non-finite value");
    const double lp = gev_logpdf(x, p);
    if (lp == kNegInf) return kNegInf;
    total += lp;
  }
  return total;
}

double gev_logpdf_grad_raw(double x, double mu, double log_sigma, double xi, double* grad) noexcept {
  xi = effective_xi(xi);
  const double sigma = std::exp(log_sigma);
  const double z = (x - mu) / sigma;
  const double u = xi * z;
  if (!(u > -1.0)) return kNegInf;
  const double w = 1.0 + u;
  const double lt = xi == 0.0 ? -z : -z * log1p_ratio(u);
  const double t = std::exp(lt);
  const double log_w = xi == 0.0 ? 0.0 : std::log1p(u);
  const double common = (1.0 + xi - t) / w;
  grad[0] = common / sigma;
  grad[1] = -1.0 + z * common;
  grad[2] = (1.0 - t) * z * z * log1p_curvature(u) - z / w;
  return -log_sigma - log_w + lt - t;
}

GevGradient gev_logpdf_grad(double x, const GevParams& p) {
  validate(p);
  const double xi = effective_xi(p.xi);
  if (xi != 0.0 && !(1.0 + xi * (x - p.mu) / p.sigma > 0.0)) {
    throw DomainError("gradient requested at a point outside the GEV support");
  }
  double g[3];
  if (gev_logpdf_grad_raw(x, p.mu, std::log(p.sigma), p.xi, g) == kNegInf) {
    throw DomainError("gradient requested at a point outside the GEV support");
  }
  return {g[0], g[1], g[2]};
}

GevGradient gev_loglik_grad(const GevParams& p, std::span<const double> sample) {
  if (sample.empty()) throw DomainError("gradient of an empty sample");
  GevGradient total;
  for (double x : sample) {
    const GevGradient g = gev_logpdf_grad(x, p);
    total.mu += g.mu;
    total.log_sigma += g.log_sigma;
    total.xi += g.xi;
  }
  return total;
}

std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed) {
  validate(p);
  if (n == 0) throw DomainError("sample size must be at least 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = gev_quantile(rng.uniform(), p);
  return out;
}

}  // namespace nsgev
