#pragma once

// Dense linear-algebra kernels behind the penalized likelihood: linear
// predictors (X beta), score accumulation (X^T w) and weighted Gram matrices
// (X^T diag(w) X). Each kernel has a scalar reference implementation and
// SIMD variants; the variant is picked once at startup from the CPU's
// capabilities and can be pinned with NSGEV_SIMD=scalar|avx2|neon.
//
// Matrices are dense row-major with `cols` doubles per row.

#include <cstddef>
#include <span>
#include <string_view>

namespace nsgev::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view isa_name(Isa isa);
[[nodiscard]] bool isa_supported(Isa isa);
[[nodiscard]] Isa active_isa();
// Throws DomainError if `isa` is not supported on this machine.
void set_active_isa(Isa isa);

// Function table shared by every ISA.
struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // Upper triangle (row-major, p x p) of A += w * x x^T
  void (*syr_upper)(double w, const double* x, double* a, std::size_t p);
};

[[nodiscard]] const KernelTable& table(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);

// out[i] = row_i(x) . beta
void gemv(std::span<const double> x, std::size_t rows, std::size_t cols,
          std::span<const double> beta, std::span<double> out);

// out = sum_i w[i] * row_i(x); out is overwritten.
void gemv_t(std::span<const double> x, std::size_t rows, std::size_t cols,
            std::span<const double> w, std::span<double> out);

// out (cols x cols, row-major, full symmetric) = sum_i w[i] row_i row_i^T.
void weighted_gram(std::span<const double> x, std::size_t rows, std::size_t cols,
                   std::span<const double> w, std::span<double> out);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void syr_upper(double w, const double* x, double* a, std::size_t p);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void syr_upper(double w, const double* x, double* a, std::size_t p);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void syr_upper(double w, const double* x, double* a, std::size_t p);
}  // namespace neon
#endif

}  // namespace nsgev::kernels
