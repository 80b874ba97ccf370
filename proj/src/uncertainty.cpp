#include "nsgev/uncertainty.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "nsgev/error.hpp"
#include "nsgev/random.hpp"

namespace nsgev {

std::vector<double> BootstrapResult::column(std::size_t j) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& row : values) out.push_back(row.at(j));
  return out;
}

std::vector<double> simulate_from_model(const Model& model, std::uint64_t seed) {
  Rng rng(seed);
  if (const auto* s = std::get_if<StationaryFit>(&model)) {
    std::vector<double> out(s->n);
    for (auto& x : out) x = gev_quantile(rng.uniform(), s->params);
    return out;
  }
  const auto& fit = std::get<FittedModel>(model);
  std::vector<double> out;
  out.reserve(fit.design_points.size());
  for (const auto& p : fit.design_points) out.push_back(gev_quantile(rng.uniform(), predict_params(fit, p.month, p.year)));
  return out;
}

namespace {

std::optional<std::vector<double>> run_replicate(const Model& model, const Statistic& statistic,
                                                 std::uint64_t seed) {
  const std::vector<double> data = simulate_from_model(model, seed);
  try {
    if (const auto* s = std::get_if<StationaryFit>(&model)) {
      StationaryOptions opts;
      opts.xi_bounds = s->xi_bounds;
      return statistic(Model{fit_gev_mle(data, opts)});
    }
    const FittedModel refit = refit_at_design(std::get<FittedModel>(model), data);
    if (!refit.converged) return std::nullopt;
    return statistic(Model{refit});
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

BootstrapResult parametric_bootstrap(const Model& model, const Statistic& statistic, const BootstrapOptions& options) {
  if (options.replicates < kMinReplicates) {
    throw DomainError("bootstrap needs at least " + std::to_string(kMinReplicates) + " replicates");
  }
  const std::size_t b_total = options.replicates;
  std::vector<std::optional<std::vector<double>>> slots(b_total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next.fetch_add(1); b < b_total; b = next.fetch_add(1)) {
      slots[b] = run_replicate(model, statistic, stream_seed(options.seed, b));
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(b_total)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  BootstrapResult result;
  result.requested = b_total;
  for (std::size_t b = 0; b < b_total; ++b) {
    if (slots[b]) {
      result.values.push_back(std::move(*slots[b]));
      result.replicate_ids.push_back(b);
    } else {
      result.failed_ids.push_back(b);
    }
  }
  if (static_cast<double>(result.failed_ids.size()) > options.max_failure_fraction * static_cast<double>(b_total)) {
    throw DegenerateError("bootstrap degenerate: " + std::to_string(result.failed_ids.size()) + " of " +
                          std::to_string(b_total) + " replicates failed");
  }
  return result;
}

double hazen_quantile(std::span<const double> samples, double prob) {
  if (samples.empty()) throw DomainError("quantile of an empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  const double pos = prob * n + 0.5;  // 1-based rank with (i - 0.5) / n positions
  if (pos <= 1.0) return x.front();
  if (pos >= n) return x.back();
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  return x[i - 1] + frac * (x[i] - x[i - 1]);
}

std::pair<double, double> percentile_ci(std::span<const double> samples, double level) {
  if (!(level >= 0.0 && level < 1.0)) throw DomainError("confidence level must lie in [0, 1)");
  const double tail = (1.0 - level) / 2.0;
  return {hazen_quantile(samples, tail), hazen_quantile(samples, 1.0 - tail)};
}

}  // namespace nsgev
