#include "nsgev/spline.hpp"

#include <algorithm>
#include <cmath>

#include "nsgev/error.hpp"

namespace nsgev {
namespace {

constexpr int kMonthDegree = 3;

int year_degree(int k_year) { return std::min(3, k_year - 1); }

// Difference operator of `order` on k coefficients, optionally wrapping.
Eigen::MatrixXd difference_operator(int k, int order, bool cyclic) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(k, k);
  for (int o = 0; o < order; ++o) {
    const int rows_in = static_cast<int>(d.rows());
    const int rows_out = cyclic ? rows_in : rows_in - 1;
    Eigen::MatrixXd next(rows_out, k);
    for (int r = 0; r < rows_out; ++r) next.row(r) = d.row((r + 1) % rows_in) - d.row(r);
    d = std::move(next);
  }
  return d;
}

// Columns spanning the orthogonal complement of c, from a Householder reflection.
Eigen::MatrixXd sum_to_zero_basis(const Eigen::VectorXd& c) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  const Eigen::Index k = c.size();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
  return q.rightCols(k - 1);
}

std::size_t nullity(const Eigen::MatrixXd& s) {
  if (s.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const double top = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (std::abs(eig.eigenvalues()(i)) <= 1e-9 * top) ++n;
  }
  return n;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void validate(const BasisSpec& spec, bool check_years) {
  if (spec.k_month < 4 || spec.k_month > 12) throw DomainError("k_month must lie in [4, 12]");
  if (spec.k_year < 3) throw DomainError("k_year must be at least 3");
  if (spec.penalty_order != 1 && spec.penalty_order != 2) {
    throw DomainError("penalty_order must be 1 or 2");
  }
  if (check_years) {
    if (spec.last_year <= spec.first_year) throw DomainError("year window must span at least two years");
    if (spec.last_year - spec.first_year + 1 < spec.k_year) {
      throw DomainError("k_year exceeds the number of years in the window");
    }
  }
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::stationary: return "stationary";
    case ModelKind::seasonal: return "seasonal";
    case ModelKind::tensor: return "tensor";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "stationary") return ModelKind::stationary;
  if (name == "seasonal") return ModelKind::seasonal;
  if (name == "tensor") return ModelKind::tensor;
  throw DomainError("unknown model kind '" + name + "'");
}

double cardinal_bspline(int degree, double x) {
  if (x < 0.0 || x >= degree + 1.0) return 0.0;
  if (degree == 0) return 1.0;
  return (x * cardinal_bspline(degree - 1, x) +
          (degree + 1.0 - x) * cardinal_bspline(degree - 1, x - 1.0)) /
         degree;
}

std::vector<double> cyclic_basis_at(double month_coord, int k_month) {
  const double c = month_coord / 12.0 * k_month;
  std::vector<double> out(static_cast<std::size_t>(k_month));
  for (int j = 0; j < k_month; ++j) {
    double arg = std::fmod(c - j + 2.0, static_cast<double>(k_month));
    if (arg < 0.0) arg += k_month;
    out[static_cast<std::size_t>(j)] = cardinal_bspline(kMonthDegree, arg);
  }
  return out;
}

std::vector<double> cyclic_month_basis(int month, const BasisSpec& spec) {
  if (month < 1 || month > 12) throw DomainError("month must lie in 1..12");
  return cyclic_basis_at(month - 0.5, spec.k_month);
}

std::vector<double> year_basis(int year, const BasisSpec& spec) {
  if (year < spec.first_year || year > spec.last_year) {
    throw ExtrapolationError("year " + std::to_string(year) + " lies outside the fitted window " +
                             std::to_string(spec.first_year) + ".." + std::to_string(spec.last_year));
  }
  const int d = year_degree(spec.k_year);
  const int segments = spec.k_year - d;
  const double s = spec.last_year == spec.first_year
                       ? 0.0
                       : static_cast<double>(year - spec.first_year) / (spec.last_year - spec.first_year);
  const double x = s * segments;
  std::vector<double> out(static_cast<std::size_t>(spec.k_year));
  for (int j = 0; j < spec.k_year; ++j) out[static_cast<std::size_t>(j)] = cardinal_bspline(d, x - j + d);
  return out;
}

std::vector<double> tensor_row(int month, int year, const BasisSpec& spec) {
  const auto m = cyclic_month_basis(month, spec);
  const auto y = year_basis(year, spec);
  std::vector<double> out;
  out.reserve(m.size() * y.size());
  for (double a : m) {
    for (double b : y) out.push_back(a * b);
  }
  return out;
}

Eigen::MatrixXd month_penalty(const BasisSpec& spec) {
  const Eigen::MatrixXd d = difference_operator(spec.k_month, spec.penalty_order, true);
  return d.transpose() * d;
}

Eigen::MatrixXd year_penalty(const BasisSpec& spec) {
  const Eigen::MatrixXd d = difference_operator(spec.k_year, spec.penalty_order, false);
  return d.transpose() * d;
}

TensorPenalties penalty_matrices(const BasisSpec& spec) {
  const Eigen::MatrixXd sm = month_penalty(spec);
  const Eigen::MatrixXd sy = year_penalty(spec);
  const Eigen::Index km = sm.rows();
  const Eigen::Index ky = sy.rows();
  TensorPenalties out{Eigen::MatrixXd::Zero(km * ky, km * ky), Eigen::MatrixXd::Zero(km * ky, km * ky)};
  for (Eigen::Index a = 0; a < km; ++a) {
    for (Eigen::Index b = 0; b < km; ++b) {
      for (Eigen::Index i = 0; i < ky; ++i) {
        out.month(a * ky + i, b * ky + i) = sm(a, b);
      }
    }
  }
  for (Eigen::Index a = 0; a < km; ++a) out.year.block(a * ky, a * ky, ky, ky) = sy;
  return out;
}

SurfaceBasis::SurfaceBasis(ModelKind kind, const BasisSpec& spec) : kind_(kind), spec_(spec) {
  if (kind == ModelKind::stationary) throw DomainError("stationary models have no surface basis");
  validate(spec, kind == ModelKind::tensor);

  const int km = spec.k_month;
  Eigen::VectorXd month_sums = Eigen::VectorXd::Zero(km);
  for (int m = 1; m <= 12; ++m) month_sums += to_vector(cyclic_month_basis(m, spec));
  month_z_ = sum_to_zero_basis(month_sums);
  const Eigen::MatrixXd sm = month_z_.transpose() * nsgev::month_penalty(spec) * month_z_;

  labels_.emplace_back("(Intercept)");
  for (int i = 1; i < km; ++i) labels_.push_back("s(month)." + std::to_string(i));

  if (kind == ModelKind::seasonal) {
    const auto p = static_cast<Eigen::Index>(labels_.size());
    month_penalty_ = Eigen::MatrixXd::Zero(p, p);
    month_penalty_.block(1, 1, km - 1, km - 1) = sm;
    year_penalty_ = Eigen::MatrixXd::Zero(p, p);
    normalize_penalties();
    null_dim_ = nullity(month_penalty_);
    return;
  }

  const int ky = spec.k_year;
  Eigen::VectorXd year_sums = Eigen::VectorXd::Zero(ky);
  for (int y = spec.first_year; y <= spec.last_year; ++y) year_sums += to_vector(year_basis(y, spec));
  year_z_ = sum_to_zero_basis(year_sums);
  const Eigen::MatrixXd sy = year_z_.transpose() * nsgev::year_penalty(spec) * year_z_;

  for (int i = 1; i < ky; ++i) {
    year_columns_.push_back(labels_.size());
    labels_.push_back("s(year)." + std::to_string(i));
  }
  for (int a = 1; a < km; ++a) {
    for (int b = 1; b < ky; ++b) {
      year_columns_.push_back(labels_.size());
      labels_.push_back("ti(month,year)." + std::to_string(a) + "." + std::to_string(b));
    }
  }

  const auto p = static_cast<Eigen::Index>(labels_.size());
  const Eigen::Index month_main = 1;
  const Eigen::Index year_main = month_main + (km - 1);
  const Eigen::Index inter = year_main + (ky - 1);
  const Eigen::Index nm = km - 1;
  const Eigen::Index ny = ky - 1;

  month_penalty_ = Eigen::MatrixXd::Zero(p, p);
  year_penalty_ = Eigen::MatrixXd::Zero(p, p);
  month_penalty_.block(month_main, month_main, nm, nm) = sm;
  year_penalty_.block(year_main, year_main, ny, ny) = sy;
  for (Eigen::Index a = 0; a < nm; ++a) {
    for (Eigen::Index b = 0; b < nm; ++b) {
      for (Eigen::Index i = 0; i < ny; ++i) month_penalty_(inter + a * ny + i, inter + b * ny + i) = sm(a, b);
    }
    year_penalty_.block(inter + a * ny, inter + a * ny, ny, ny) = sy;
  }

  normalize_penalties();
  const Eigen::MatrixXd total = month_penalty_ + year_penalty_;
  null_dim_ = nullity(total);
  Eigen::MatrixXd year_block(year_columns_.size(), year_columns_.size());
  for (std::size_t r = 0; r < year_columns_.size(); ++r) {
    for (std::size_t c = 0; c < year_columns_.size(); ++c) {
      year_block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          total(static_cast<Eigen::Index>(year_columns_[r]), static_cast<Eigen::Index>(year_columns_[c]));
    }
  }
  year_null_dim_ = nullity(year_block);
}

void SurfaceBasis::normalize_penalties() {
  // Rescale every penalty block to the size of its columns' Gram matrix on
  // the canonical grid, so one lambda weighs main effects and interactions alike.
  std::vector<DesignPoint> grid;
  const int y0 = kind_ == ModelKind::tensor ? spec_.first_year : 0;
  const int y1 = kind_ == ModelKind::tensor ? spec_.last_year : 0;
  for (int y = y0; y <= y1; ++y) {
    for (int m = 1; m <= 12; ++m) grid.push_back({y, m});
  }
  const DesignMatrix x = design(grid);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> xm(
      x.values.data(), static_cast<Eigen::Index>(x.rows), static_cast<Eigen::Index>(x.cols));
  const Eigen::MatrixXd gram = xm.transpose() * xm;

  auto rescale = [&](Eigen::MatrixXd& penalty, Eigen::Index start, Eigen::Index count) {
    if (count == 0) return;
    auto block = penalty.block(start, start, count, count);
    const double s_norm = block.norm();
    if (s_norm == 0.0) return;
    block *= gram.block(start, start, count, count).norm() / s_norm;
  };
  const Eigen::Index nm = spec_.k_month - 1;
  rescale(month_penalty_, 1, nm);
  if (kind_ == ModelKind::tensor) {
    const Eigen::Index ny = spec_.k_year - 1;
    rescale(year_penalty_, 1 + nm, ny);
    rescale(month_penalty_, 1 + nm + ny, nm * ny);
    rescale(year_penalty_, 1 + nm + ny, nm * ny);
  }
}

void SurfaceBasis::row(int month, int year, std::span<double> out) const {
  if (out.size() != size()) throw DomainError("basis row buffer has the wrong length");
  const Eigen::VectorXd m = month_z_.transpose() * to_vector(cyclic_month_basis(month, spec_));
  out[0] = 1.0;
  const auto nm = static_cast<std::size_t>(m.size());
  for (std::size_t i = 0; i < nm; ++i) out[1 + i] = m(static_cast<Eigen::Index>(i));
  if (kind_ == ModelKind::seasonal) return;

  const Eigen::VectorXd y = year_z_.transpose() * to_vector(year_basis(year, spec_));
  const auto ny = static_cast<std::size_t>(y.size());
  std::size_t k = 1 + nm;
  for (std::size_t i = 0; i < ny; ++i) out[k++] = y(static_cast<Eigen::Index>(i));
  for (std::size_t a = 0; a < nm; ++a) {
    for (std::size_t b = 0; b < ny; ++b) out[k++] = m(static_cast<Eigen::Index>(a)) * y(static_cast<Eigen::Index>(b));
  }
}

std::vector<double> SurfaceBasis::row(int month, int year) const {
  std::vector<double> out(size());
  row(month, year, out);
  return out;
}

DesignMatrix SurfaceBasis::design(std::span<const DesignPoint> points) const {
  DesignMatrix x;
  x.rows = points.size();
  x.cols = size();
  x.column_labels = labels_;
  x.values.resize(x.rows * x.cols);
  for (std::size_t i = 0; i < points.size(); ++i) {
    row(points[i].month, points[i].year, std::span<double>(x.values.data() + i * x.cols, x.cols));
  }
  return x;
}

}  // namespace nsgev
