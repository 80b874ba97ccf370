#pragma once

// Generalized extreme value distribution, Coles (2001) sign convention:
//
//   F(x) = exp(-t(x)),  t(x) = (1 + xi (x - mu) / sigma)^(-1/xi)
//
// xi > 0 has a lower support bound mu - sigma/xi, xi < 0 an upper one.
// |xi| < kGumbelThreshold is evaluated as the Gumbel law (xi = 0). Away from
// the threshold the small-|xi| terms are computed through log1p/series forms,
// so values and derivatives are continuous across the branch switch.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace nsgev {

inline constexpr double kGumbelThreshold = 1e-8;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  friend bool operator==(const GevParams&, const GevParams&) = default;
};

// Throws DomainError when sigma <= 0 or any field is non-finite.
void validate(const GevParams& p);

[[nodiscard]] bool in_support(double x, const GevParams& p);

// Support endpoints; -inf / +inf when unbounded on that side.
[[nodiscard]] double lower_support_bound(const GevParams& p);
[[nodiscard]] double upper_support_bound(const GevParams& p);

[[nodiscard]] double gev_cdf(double x, const GevParams& p);
// log F(x); -inf below the lower bound, 0 above the upper bound.
[[nodiscard]] double gev_log_cdf(double x, const GevParams& p);
// Returns kNegInf outside the support (the sentinel used by the optimizers).
[[nodiscard]] double gev_logpdf(double x, const GevParams& p);
[[nodiscard]] double gev_quantile(double prob, const GevParams& p);

// Sum of gev_logpdf; kNegInf if any point is out of support.
[[nodiscard]] double gev_loglik(const GevParams& p, std::span<const double> sample);

// Derivatives in the working parameterization (mu, log sigma, xi).
struct GevGradient {
  double mu = 0.0;
  double log_sigma = 0.0;
  double xi = 0.0;
};

// Unchecked per-point kernel used by the fitting loops: returns the log
// density and writes the working-coordinate gradient into grad[0..2], or
// returns kNegInf (grad untouched) if x is not strictly inside the support.
double gev_logpdf_grad_raw(double x, double mu, double log_sigma, double xi, double* grad) noexcept;

// Throws DomainError for points on or outside the support boundary.
[[nodiscard]] GevGradient gev_logpdf_grad(double x, const GevParams& p);
[[nodiscard]] GevGradient gev_loglik_grad(const GevParams& p, std::span<const double> sample);

// Inverse-transform sampling through Rng(seed); see random.hpp.
[[nodiscard]] std::vector<double> gev_sample(const GevParams& p, std::size_t n, std::uint64_t seed);

}  // namespace nsgev
