#include "nsgev/kernels.hpp"

namespace nsgev::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void syr_upper(double w, const double* x, double* a, std::size_t p) {
  for (std::size_t r = 0; r < p; ++r) {
    const double wr = w * x[r];
    double* row = a + r * p;
    for (std::size_t c = r; c < p; ++c) row[c] += wr * x[c];
  }
}

}  // namespace nsgev::kernels::scalar
