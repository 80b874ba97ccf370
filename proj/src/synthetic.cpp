#include "nsgev/synthetic.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "nsgev/error.hpp"
#include "nsgev/random.hpp"

namespace nsgev {
namespace {

double surface(const SurfaceTruth& s, double cycle, double frac) {
  return s.base + (s.amplitude + s.amplitude_trend * frac) * cycle + s.trend * frac;
}

SurfaceTruth surface_from_json(const nlohmann::json& j) {
  SurfaceTruth s;
  s.base = j.value("base", 0.0);
  s.amplitude = j.value("amplitude", 0.0);
  s.amplitude_trend = j.value("amplitude_trend", 0.0);
  s.trend = j.value("trend", 0.0);
  return s;
}

nlohmann::json surface_to_json(const SurfaceTruth& s) {
  return {{"base", s.base}, {"amplitude", s.amplitude}, {"amplitude_trend", s.amplitude_trend}, {"trend", s.trend}};
}

}  // namespace

GevParams truth_params(const SyntheticTruth& truth, int month, int year, int first_year, int last_year) {
  const double frac = last_year == first_year ? 0.0 : static_cast<double>(year - first_year) / (last_year - first_year);
  const double cycle = std::cos(2.0 * std::numbers::pi * (month - truth.peak_month) / 12.0);
  return {surface(truth.mu, cycle, frac), std::exp(surface(truth.log_sigma, cycle, frac)), truth.xi};
}

BlockMaximaSeries simulate_monthly_maxima(const SyntheticTruth& truth, int first_year, int last_year,
                                          std::uint64_t seed) {
  if (last_year < first_year) throw DomainError("empty simulation window");
  if (!(std::abs(truth.ar1) < 1.0)) throw DomainError("ar1 coefficient must lie in (-1, 1)");
  Rng rng(seed);
  BlockMaximaSeries out;
  out.kind = BlockKind::monthly;
  out.scenario = "synthetic";
  const double innovation = std::sqrt(1.0 - truth.ar1 * truth.ar1);
  double latent = 0.0;
  bool first = true;
  for (int y = first_year; y <= last_year; ++y) {
    for (int m = 1; m <= 12; ++m) {
      double u = 0.0;
      if (truth.ar1 == 0.0) {
        u = rng.uniform();
      } else {
        latent = first ? rng.normal() : truth.ar1 * latent + innovation * rng.normal();
        u = std::clamp(standard_normal_cdf(latent), 1e-16, 1.0 - 1e-16);
      }
      first = false;
      const GevParams p = truth_params(truth, m, y, first_year, last_year);
      out.records.push_back({y, m, gev_quantile(u, p), 1.0, false});
    }
  }
  return out;
}

RawSeries embed_in_series(const BlockMaximaSeries& maxima, std::int64_t step_seconds, std::uint64_t seed) {
  if (maxima.kind != BlockKind::monthly) throw DomainError("embedding expects monthly maxima");
  if (step_seconds <= 0 || 86400 % step_seconds != 0) throw DomainError("step must divide one day");
  Rng rng(seed);
  RawSeries s;
  s.step_seconds = step_seconds;
  s.scenario = maxima.scenario;
  for (const auto& r : maxima.records) {
    const std::int64_t start = to_epoch_seconds({r.year, r.month, 1, 0, 0, 0});
    const std::int64_t slots = days_in_month(r.year, r.month) * 86400 / step_seconds;
    const auto peak_slot = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(slots));
    for (std::int64_t k = 0; k < slots; ++k) {
      s.times.push_back(start + k * step_seconds);
      const double fraction = 0.2 + 0.75 * rng.uniform();
      const double floor = std::min(r.maximum, 0.0);
      s.values.push_back(k == peak_slot ? r.maximum : floor + fraction * (r.maximum - floor) - 1e-9);
    }
  }
  return s;
}

SyntheticTruth truth_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("truth config is not valid JSON: ") + e.what());
  }
  if (j.value("schema", 1) != 1) throw DomainError("unsupported truth config schema");
  SyntheticTruth t;
  if (j.contains("mu")) t.mu = surface_from_json(j["mu"]);
  if (j.contains("log_sigma")) t.log_sigma = surface_from_json(j["log_sigma"]);
  t.xi = j.value("xi", t.xi);
  t.peak_month = j.value("peak_month", t.peak_month);
  t.ar1 = j.value("ar1", t.ar1);
  return t;
}

std::string truth_to_json(const SyntheticTruth& t) {
  const nlohmann::json j = {{"schema", 1},
                            {"mu", surface_to_json(t.mu)},
                            {"log_sigma", surface_to_json(t.log_sigma)},
                            {"xi", t.xi},
                            {"peak_month", t.peak_month},
                            {"ar1", t.ar1}};
  return j.dump(2);
}

}  // namespace nsgev
