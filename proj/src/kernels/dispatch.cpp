#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include "nsgev/error.hpp"
#include "nsgev/kernels.hpp"

namespace nsgev::kernels {
namespace {

constexpr KernelTable kScalarTable{scalar::dot, scalar::axpy, scalar::syr_upper};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table{avx2::dot, avx2::axpy, avx2::syr_upper};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeonTable{neon::dot, neon::axpy, neon::syr_upper};
#endif

Isa detect() {
  if (const char* forced = std::getenv("NSGEV_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    if (name == "neon" && isa_supported(Isa::neon)) return Isa::neon;
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw DomainError("SIMD variant '" + std::string(isa_name(isa)) + "' is not supported here");
  }
  active().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2: return kAvx2Table;
#endif
#if defined(__aarch64__)
    case Isa::neon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("dot: length mismatch");
  return table(active_isa()).dot(a.data(), b.data(), a.size());
}

void gemv(std::span<const double> x, std::size_t rows, std::size_t cols,
          std::span<const double> beta, std::span<double> out) {
  if (x.size() != rows * cols || beta.size() != cols || out.size() != rows) {
    throw DomainError("gemv: shape mismatch");
  }
  const auto& k = table(active_isa());
  for (std::size_t i = 0; i < rows; ++i) out[i] = k.dot(x.data() + i * cols, beta.data(), cols);
}

void gemv_t(std::span<const double> x, std::size_t rows, std::size_t cols,
            std::span<const double> w, std::span<double> out) {
  if (x.size() != rows * cols || w.size() != rows || out.size() != cols) {
    throw DomainError("gemv_t: shape mismatch");
  }
  const auto& k = table(active_isa());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < rows; ++i) k.axpy(w[i], x.data() + i * cols, out.data(), cols);
}

void weighted_gram(std::span<const double> x, std::size_t rows, std::size_t cols,
                   std::span<const double> w, std::span<double> out) {
  if (x.size() != rows * cols || w.size() != rows || out.size() != cols * cols) {
    throw DomainError("weighted_gram: shape mismatch");
  }
  const auto& k = table(active_isa());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < rows; ++i) k.syr_upper(w[i], x.data() + i * cols, out.data(), cols);
  for (std::size_t r = 0; r < cols; ++r) {
    for (std::size_t c = 0; c < r; ++c) out[r * cols + c] = out[c * cols + r];
  }
}

}  // namespace nsgev::kernels
