#include "nsgev/cdft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "nsgev/csv.hpp"
#include "nsgev/error.hpp"

namespace nsgev {
namespace {

const char* const kMonthNames[] = {"January", "February", "March",     "April",   "May",      "June",
                                   "July",    "August",   "September", "October", "November", "December"};

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

void check_sample(std::span<const double> sample, std::size_t floor, const char* name) {
  if (sample.size() < floor) {
    throw DataSizeError(std::string(name) + " has " + std::to_string(sample.size()) + " values, need at least " +
                        std::to_string(floor));
  }
  for (double v : sample) {
    if (!std::isfinite(v)) throw DomainError(std::string(name) + " contains a non-finite value");
  }
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  if (*lo == *hi) throw DegenerateError(std::string(name) + " is constant");
}

double mean_of(std::span<const double> v) {
  return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::span<const double> sample) : n_(sample.size()) {
  if (n_ < 2) throw DomainError("empirical CDF needs at least 2 values");
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DomainError("empirical CDF sample contains a non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(n_);
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    // mean of (k + 0.5) / n for k in [i, j)
    values_.push_back(sorted[i]);
    positions_.push_back((static_cast<double>(i + j) / 2.0) / n);
    i = j;
  }
}

double EmpiricalCdf::cdf(double x) const {
  if (values_.size() == 1) return positions_.front();
  return interpolate(values_, positions_, x);
}

double EmpiricalCdf::quantile(double p) const {
  if (values_.size() == 1) return values_.front();
  return interpolate(positions_, values_, p);
}

CdftOutput cdft_correct(std::span<const double> ref_local, std::span<const double> ref_model,
                        std::span<const double> fut_model, const CdftOptions& options) {
  check_sample(ref_local, options.min_sample, "reference local sample");
  check_sample(ref_model, options.min_sample, "reference model sample");
  check_sample(fut_model, options.min_sample, "future model sample");
  const EmpiricalCdf rl(ref_local);
  const EmpiricalCdf rm(ref_model);
  const EmpiricalCdf fm(fut_model);

  const auto inside = [](const std::vector<double>& knots, double v) {
    return v >= knots.front() && v <= knots.back();
  };
  // Knot-wise map with a validity flag; the valid set is an interval since
  // every step is monotone.
  const auto& fx = fm.sorted_values();
  std::vector<double> mapped(fx.size());
  std::size_t first = fx.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double p = fm.cdf(fx[i]);
    const double v = rl.quantile(p);
    const double q = rm.cdf(v);
    mapped[i] = fm.quantile(q);
    const bool ok = inside(rl.plotting_positions(), p) && inside(rm.sorted_values(), v) &&
                    inside(fm.plotting_positions(), q);
    if (ok) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first == fx.size()) throw DegenerateError("reference and future samples do not overlap");
  const double offset_lo = mapped[first] - fx[first];
  const double offset_hi = mapped[last] - fx[last];

  CdftOutput out;
  out.values.reserve(fut_model.size());
  for (double x : fut_model) {
    double y;
    if (x < fx[first]) {
      y = x + offset_lo;
    } else if (x > fx[last]) {
      y = x + offset_hi;
    } else {
      y = interpolate(fx, mapped, x);
    }
    if (y < options.floor) {
      y = options.floor;
      ++out.clamped;
    }
    out.values.push_back(y);
  }
  return out;
}

MonthlyCdftResult cdft_correct_monthly(const RawSeries& ref_local, const RawSeries& ref_model,
                                       const RawSeries& fut_model, const CdftOptions& options) {
  struct Strata {
    std::array<std::vector<double>, 12> values;
    std::array<std::vector<std::size_t>, 12> index;
  };
  const auto stratify = [](const RawSeries& s) {
    Strata st;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!std::isfinite(s.values[i])) continue;
      const int m = from_epoch_seconds(s.times[i]).month;
      st.values[m - 1].push_back(s.values[i]);
      st.index[m - 1].push_back(i);
    }
    return st;
  };
  const Strata rl = stratify(ref_local);
  const Strata rm = stratify(ref_model);
  const Strata fm = stratify(fut_model);

  const std::pair<const Strata*, const char*> inputs[] = {
      {&rl, "reference local"}, {&rm, "reference model"}, {&fm, "future model"}};
  for (int m = 0; m < 12; ++m) {
    for (const auto& [st, name] : inputs) {
      if (st->values[m].empty()) {
        throw StratificationError(std::string(kMonthNames[m]) + " (month " + std::to_string(m + 1) +
                                  ") is absent from the " + name + " series");
      }
    }
  }

  MonthlyCdftResult result;
  result.corrected = fut_model;
  for (int m = 0; m < 12; ++m) {
    CdftOutput c;
    try {
      c = cdft_correct(rl.values[m], rm.values[m], fm.values[m], options);
    } catch (const Error& e) {
      throw StratificationError(std::string(kMonthNames[m]) + ": " + e.what());
    }
    for (std::size_t k = 0; k < c.values.size(); ++k) result.corrected.values[fm.index[m][k]] = c.values[k];
    MonthSummary& s = result.months[m];
    s.month = m + 1;
    s.n_ref_local = rl.values[m].size();
    s.n_ref_model = rm.values[m].size();
    s.n_fut_model = fm.values[m].size();
    s.mean_ref_local = mean_of(rl.values[m]);
    s.mean_ref_model = mean_of(rm.values[m]);
    s.mean_fut_model = mean_of(fm.values[m]);
    s.mean_corrected = mean_of(c.values);
    s.clamped = c.clamped;
    result.clamped += c.clamped;
  }
  return result;
}

void write_month_summary(std::ostream& out, const MonthlyCdftResult& result) {
  out << "month,n_ref_local,n_ref_model,n_fut_model,mean_ref_local,mean_ref_model,mean_fut_model,mean_corrected,"
         "clamped\n";
  for (const auto& s : result.months) {
    out << s.month << ',' << s.n_ref_local << ',' << s.n_ref_model << ',' << s.n_fut_model << ','
        << csv::format(s.mean_ref_local) << ',' << csv::format(s.mean_ref_model) << ','
        << csv::format(s.mean_fut_model) << ',' << csv::format(s.mean_corrected) << ',' << s.clamped << '\n';
  }
}

}  // namespace nsgev
