#include <arm_neon.h>

#include "nsgev/kernels.hpp"

namespace nsgev::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  double result = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void syr_upper(double w, const double* x, double* a, std::size_t p) {
  for (std::size_t r = 0; r < p; ++r) {
    const double wr = w * x[r];
    const float64x2_t vw = vdupq_n_f64(wr);
    double* row = a + r * p;
    std::size_t c = r;
    for (; c + 2 <= p; c += 2) vst1q_f64(row + c, vfmaq_f64(vld1q_f64(row + c), vw, vld1q_f64(x + c)));
    for (; c < p; ++c) row[c] += wr * x[c];
  }
}

}  // namespace nsgev::kernels::neon
