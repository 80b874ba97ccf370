#include "nsgev/return_levels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsgev/error.hpp"

namespace nsgev {
namespace {

double sum_log_cdf(std::span<const GevParams> laws, double x) {
  double total = 0.0;
  for (const auto& p : laws) {
    const double l = gev_log_cdf(x, p);
    if (l == kNegInf) return kNegInf;
    total += l;
  }
  return total;
}

std::vector<GevParams> lifetime_laws(const Model& model, std::span<const int> years) {
  if (years.empty()) throw DomainError("lifetime needs at least one year");
  std::vector<int> sorted(years.begin(), years.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<GevParams> laws;
  for (int y : sorted) {
    const auto block = annual_block_laws(model, y);
    laws.insert(laws.end(), block.begin(), block.end());
  }
  return laws;
}

}  // namespace

ModelKind kind_of(const Model& model) {
  return std::holds_alternative<StationaryFit>(model) ? ModelKind::stationary : std::get<FittedModel>(model).kind;
}

std::vector<GevParams> annual_block_laws(const Model& model, int year) {
  if (const auto* s = std::get_if<StationaryFit>(&model)) return {s->params};
  const auto& fit = std::get<FittedModel>(model);
  std::vector<GevParams> laws;
  laws.reserve(12);
  for (int m = 1; m <= 12; ++m) laws.push_back(predict_params(fit, m, year));
  return laws;
}

double monthly_quantile(const FittedModel& fit, int month, int year, double prob) {
  return gev_quantile(prob, predict_params(fit, month, year));
}

double log_annual_cdf(const Model& model, double x, int year) {
  return sum_log_cdf(annual_block_laws(model, year), x);
}

double annual_cdf(const Model& model, double x, int year) { return std::exp(log_annual_cdf(model, x, year)); }

double invert_block_product(std::span<const GevParams> laws, double log_target) {
  if (laws.empty()) throw InversionError("no block laws to invert");
  if (!(log_target < 0.0) || !std::isfinite(log_target)) throw InversionError("target probability must lie in (0, 1)");
  const double k = static_cast<double>(laws.size());
  const double target = std::exp(log_target);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sigma_max = 0.0;
  for (const auto& p : laws) {
    lo = std::max(lo, gev_quantile(target, p));
    hi = std::max(hi, gev_quantile(std::exp(log_target / k), p));
    sigma_max = std::max(sigma_max, p.sigma);
  }
  lo -= 3.0 * sigma_max;
  hi += 3.0 * sigma_max;

  auto excess = [&](double x) { return sum_log_cdf(laws, x) - log_target; };
  double width = std::max(hi - lo, sigma_max);
  int doublings = 0;
  while (!(excess(lo) <= 0.0)) {
    if (++doublings > 20) throw InversionError("could not bracket the quantile from below");
    lo -= width;
    width *= 2.0;
  }
  width = std::max(hi - lo, sigma_max);
  doublings = 0;
  while (!(excess(hi) >= 0.0)) {
    if (++doublings > 20) throw InversionError("could not bracket the quantile from above");
    hi += width;
    width *= 2.0;
  }

  // Bisection to adjacent doubles or 1e-12 relative width.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double annual_return_level(const Model& model, double return_period, int year) {
  if (!(return_period > 1.0)) throw DomainError("return period must exceed 1 year");
  const auto laws = annual_block_laws(model, year);
  return invert_block_product(laws, std::log1p(-1.0 / return_period));
}

double log_lifetime_cdf(const Model& model, double x, std::span<const int> years) {
  return sum_log_cdf(lifetime_laws(model, years), x);
}

double lifetime_cdf(const Model& model, double x, std::span<const int> years) {
  return std::exp(log_lifetime_cdf(model, x, years));
}

std::string to_string(DesignMethod method) {
  switch (method) {
    case DesignMethod::annual: return "annual";
    case DesignMethod::monthly: return "monthly";
    case DesignMethod::nonstationary: return "nonstationary";
  }
  return "unknown";
}

DesignMethod design_method_of(const Model& model) {
  switch (kind_of(model)) {
    case ModelKind::stationary: return DesignMethod::annual;
    case ModelKind::seasonal: return DesignMethod::monthly;
    case ModelKind::tensor: return DesignMethod::nonstationary;
  }
  return DesignMethod::annual;
}

DesignLevelResult equivalent_design_level(const Model& model, std::span<const int> years, double p_annual) {
  if (!(p_annual > 0.0 && p_annual < 1.0)) throw DomainError("p_annual must lie in (0, 1)");
  if (years.empty()) throw DomainError("lifetime needs at least one year");
  DesignLevelResult r;
  r.p_annual = p_annual;
  r.lifetime_years = static_cast<int>(years.size());
  r.target_survival = std::pow(1.0 - p_annual, r.lifetime_years);
  r.method = design_method_of(model);
  const auto laws = lifetime_laws(model, years);
  r.level = invert_block_product(laws, r.lifetime_years * std::log1p(-p_annual));
  r.lower = r.upper = r.level;
  return r;
}

std::vector<int> lifetime_years(int first, int last, int lifetime) {
  if (last < first) throw DomainError("empty year window");
  if (lifetime < 1) throw DomainError("lifetime must be at least one year");
  std::vector<int> years;
  for (int y = first; y <= last && static_cast<int>(years.size()) < lifetime; ++y) years.push_back(y);
  while (static_cast<int>(years.size()) < lifetime) years.push_back(last);
  return years;
}

}  // namespace nsgev
