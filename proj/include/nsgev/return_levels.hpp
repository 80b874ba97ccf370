#pragma once

// Annual and lifetime maximum distributions built from per-block GEV laws.
//
//   P(annual max <= x)   = prod_m F_{m,y}(x)
//   P(lifetime max <= x) = prod_y prod_m F_{m,y}(x)
//
// Products are evaluated as sums of log-CDFs. A stationary fit of annual
// maxima contributes one block per year.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nsgev/gev.hpp"
#include "nsgev/nonstationary.hpp"
#include "nsgev/stationary.hpp"

namespace nsgev {

using Model = std::variant<StationaryFit, FittedModel>;

[[nodiscard]] ModelKind kind_of(const Model& model);

// Per-block laws whose product is the annual-maximum CDF of `year`.
[[nodiscard]] std::vector<GevParams> annual_block_laws(const Model& model, int year);

[[nodiscard]] double monthly_quantile(const FittedModel& fit, int month, int year, double prob);

[[nodiscard]] double log_annual_cdf(const Model& model, double x, int year);
[[nodiscard]] double annual_cdf(const Model& model, double x, int year);

// Solves annual_cdf(x) = 1 - 1/N by bracketed bisection.
[[nodiscard]] double annual_return_level(const Model& model, double return_period, int year);

[[nodiscard]] double log_lifetime_cdf(const Model& model, double x, std::span<const int> years);
[[nodiscard]] double lifetime_cdf(const Model& model, double x, std::span<const int> years);

enum class DesignMethod { annual, monthly, nonstationary };
[[nodiscard]] std::string to_string(DesignMethod method);
[[nodiscard]] DesignMethod design_method_of(const Model& model);

struct DesignLevelResult {
  double level = 0.0;
  double target_survival = 0.0;  // (1 - p_annual)^lifetime_years
  int lifetime_years = 0;
  double p_annual = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool has_interval = false;
  DesignMethod method = DesignMethod::annual;
};

// Level x with lifetime_cdf(x, years) = (1 - p_annual)^|years|. The years
// list may repeat entries (held-flat extension of a short window).
[[nodiscard]] DesignLevelResult equivalent_design_level(const Model& model, std::span<const int> years,
                                                        double p_annual);

// Root of sum_b log F_b(x) = log_target over `laws`, bracketed between
// max_b q_b(upper_prob_low) - 3 sigma_max and max_b q_b(upper_prob_high) + 3 sigma_max,
// doubling the bracket up to 20 times. Throws InversionError.
[[nodiscard]] double invert_block_product(std::span<const GevParams> laws, double log_target);

// Years lo..hi extended to `lifetime` entries by repeating hi (or truncated).
[[nodiscard]] std::vector<int> lifetime_years(int first, int last, int lifetime);

}  // namespace nsgev
