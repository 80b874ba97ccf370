#include "nsgev/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nsgev/error.hpp"

namespace nsgev {
namespace {

void check_lag(std::span<const double> series, std::size_t max_lag) {
  if (series.size() <= max_lag + 2) {
    throw DataSizeError("need more than max_lag + 2 = " + std::to_string(max_lag + 2) + " residuals");
  }
}

GevParams block_law(const Model& model, const BlockRecord& r) {
  if (const auto* s = std::get_if<StationaryFit>(&model)) return s->params;
  if (r.month == 0) throw DomainError("monthly model evaluated on an annual block");
  return predict_params(std::get<FittedModel>(model), r.month, r.year);
}

}  // namespace

std::vector<double> ResidualSeries::values() const {
  std::vector<double> out;
  for (const auto& r : residuals) {
    if (r.value) out.push_back(*r.value);
  }
  return out;
}

ResidualSeries pit_residuals(const Model& model, const BlockMaximaSeries& maxima) {
  ResidualSeries out;
  std::vector<BlockRecord> records = maxima.records;
  std::stable_sort(records.begin(), records.end(), [](const BlockRecord& a, const BlockRecord& b) {
    return std::pair{a.year, a.month} < std::pair{b.year, b.month};
  });
  for (const auto& r : records) {
    Residual res{r.year, r.month, std::nullopt};
    if (r.excluded || !std::isfinite(r.maximum)) {
      ++out.gap_count;
    } else {
      const double u = std::clamp(gev_cdf(r.maximum, block_law(model, r)), 1e-12, 1.0 - 1e-12);
      res.value = -std::log(-std::log(u));
    }
    out.residuals.push_back(res);
  }
  return out;
}

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
  check_lag(series, max_lag);
  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  if (!(c0 > 1e-300)) throw DegenerateError("constant series has no autocorrelation");
  std::vector<double> out(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = k; t < series.size(); ++t) ck += (series[t] - mean) * (series[t - k] - mean);
    out[k] = ck / c0;
  }
  return out;
}

std::vector<double> pacf(std::span<const double> series, std::size_t max_lag) {
  const std::vector<double> r = acf(series, max_lag);
  std::vector<double> out;
  std::vector<double> phi;
  double v = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = r[k];
    for (std::size_t j = 1; j < k; ++j) num -= phi[j - 1] * r[k - j];
    const double kappa = num / v;
    std::vector<double> next(k);
    for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - kappa * phi[k - j - 1];
    next[k - 1] = kappa;
    phi = std::move(next);
    v *= 1.0 - kappa * kappa;
    out.push_back(kappa);
  }
  return out;
}

Correlogram correlogram(std::span<const double> series, std::size_t max_lag) {
  Correlogram c;
  c.acf = acf(series, max_lag);
  c.pacf = pacf(series, max_lag);
  c.n = series.size();
  c.band = 1.96 / std::sqrt(static_cast<double>(c.n));
  return c;
}

std::vector<std::pair<double, double>> qq_data(const Model& model, const BlockMaximaSeries& maxima) {
  std::vector<double> resid = pit_residuals(model, maxima).values();
  std::sort(resid.begin(), resid.end());
  const double n = static_cast<double>(resid.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(resid.size());
  for (std::size_t i = 0; i < resid.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    out.emplace_back(resid[i], -std::log(-std::log(p)));
  }
  return out;
}

}  // namespace nsgev
