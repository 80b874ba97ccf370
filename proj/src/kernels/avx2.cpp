// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "nsgev/kernels.hpp"

namespace nsgev::kernels::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
  constexpr std::size_t kLanes = 4;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + kLanes), _mm256_loadu_pd(b + i + kLanes), acc1);
  }
  for (; i + kLanes <= n; i += kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  double result = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
  for (; i < n; ++i) result += a[i] * b[i];
  return result;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  constexpr std::size_t kLanes = 4;
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void syr_upper(double w, const double* x, double* a, std::size_t p) {
  constexpr std::size_t kLanes = 4;
  for (std::size_t r = 0; r < p; ++r) {
    const double wr = w * x[r];
    const __m256d vw = _mm256_set1_pd(wr);
    double* row = a + r * p;
    std::size_t c = r;
    for (; c + kLanes <= p; c += kLanes) {
      _mm256_storeu_pd(row + c, _mm256_fmadd_pd(vw, _mm256_loadu_pd(x + c), _mm256_loadu_pd(row + c)));
    }
    for (; c < p; ++c) row[c] += wr * x[c];
  }
}

}  // namespace nsgev::kernels::avx2
