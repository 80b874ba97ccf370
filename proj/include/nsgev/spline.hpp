#pragma once

// Penalized regression bases for GEV parameter surfaces over (month, year).
//
// Month uses a cyclic cubic B-spline with period 12 and k_month equally
// spaced knots on the circle, evaluated at block centres (m - 0.5). Year
// uses an equally spaced B-spline (P-spline knots extended past [0, 1]) on
// the year rescaled to [0, 1]. Penalties are difference penalties on the
// coefficients (cyclic for month).
//
// SurfaceBasis builds the identifiable design actually fitted:
//   seasonal: intercept | month main effect
//   tensor:   intercept | month main | year main | month x year interaction
// Each marginal is constrained to sum to zero over the canonical grid
// (12 month centres, every integer year of the fit window) by absorbing the
// constraint with a Householder null-space basis; the interaction is the
// month-major Kronecker product of the constrained marginals. Each penalty
// block is scaled to the Frobenius norm of its columns' Gram matrix.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nsgev {

struct BasisSpec {
  int k_month = 8;
  int k_year = 5;
  int penalty_order = 2;
  int first_year = 0;
  int last_year = 0;

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

// Throws DomainError on out-of-range dimensions. When `check_years` is set,
// the year window must be non-degenerate and hold at least k_year years.
void validate(const BasisSpec& spec, bool check_years);

enum class ModelKind { stationary, seasonal, tensor };

[[nodiscard]] std::string to_string(ModelKind kind);
[[nodiscard]] ModelKind model_kind_from_string(const std::string& name);

struct DesignPoint {
  int year = 0;
  int month = 0;  // 1..12

  friend auto operator<=>(const DesignPoint&, const DesignPoint&) = default;
};

// Cardinal B-spline of degree d, support [0, d + 1).
[[nodiscard]] double cardinal_bspline(int degree, double x);

// Periodic in `month_coord` with period 12; month m sits at m - 0.5.
[[nodiscard]] std::vector<double> cyclic_basis_at(double month_coord, int k_month);
[[nodiscard]] std::vector<double> cyclic_month_basis(int month, const BasisSpec& spec);
// Throws ExtrapolationError outside [first_year, last_year].
[[nodiscard]] std::vector<double> year_basis(int year, const BasisSpec& spec);
// Kronecker product month (x) year, month-major: index = i_month * k_year + i_year.
[[nodiscard]] std::vector<double> tensor_row(int month, int year, const BasisSpec& spec);

[[nodiscard]] Eigen::MatrixXd month_penalty(const BasisSpec& spec);
[[nodiscard]] Eigen::MatrixXd year_penalty(const BasisSpec& spec);

struct TensorPenalties {
  Eigen::MatrixXd month;  // S_month (x) I_year
  Eigen::MatrixXd year;   // I_month (x) S_year
};
[[nodiscard]] TensorPenalties penalty_matrices(const BasisSpec& spec);

struct DesignMatrix {
  std::vector<double> values;  // row-major
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> column_labels;

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }
};

class SurfaceBasis {
 public:
  SurfaceBasis(ModelKind kind, const BasisSpec& spec);

  [[nodiscard]] ModelKind kind() const { return kind_; }
  [[nodiscard]] const BasisSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t size() const { return labels_.size(); }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }

  // Seasonal surfaces ignore `year`; tensor surfaces refuse years outside the window.
  void row(int month, int year, std::span<double> out) const;
  [[nodiscard]] std::vector<double> row(int month, int year) const;
  [[nodiscard]] DesignMatrix design(std::span<const DesignPoint> points) const;

  // Full size() x size() penalty for the month and year directions.
  [[nodiscard]] const Eigen::MatrixXd& month_penalty() const { return month_penalty_; }
  [[nodiscard]] const Eigen::MatrixXd& year_penalty() const { return year_penalty_; }

  // Columns carrying year variation (year main effect and interaction).
  [[nodiscard]] const std::vector<std::size_t>& year_columns() const { return year_columns_; }
  // Dimension of the joint null space of the month and year penalties.
  [[nodiscard]] std::size_t null_space_dim() const { return null_dim_; }
  // Null-space dimension restricted to the year columns.
  [[nodiscard]] std::size_t year_null_space_dim() const { return year_null_dim_; }

 private:
  void normalize_penalties();

  ModelKind kind_;
  BasisSpec spec_;
  Eigen::MatrixXd month_z_;
  Eigen::MatrixXd year_z_;
  Eigen::MatrixXd month_penalty_;
  Eigen::MatrixXd year_penalty_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> year_columns_;
  std::size_t null_dim_ = 0;
  std::size_t year_null_dim_ = 0;
};

}  // namespace nsgev
