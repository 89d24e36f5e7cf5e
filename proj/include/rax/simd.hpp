#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops shared by occupancy propagation, the
// dynamic-programming backups and the design objective. Every routine has a
// portable scalar reference and, on x86-64, an AVX2/FMA variant. The variant
// is picked once at startup from CPUID; set RAX_SIMD=scalar in the
// environment to force the reference path.
namespace rax::simd {

struct KernelTable {
  const char* name;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] = (1 - alpha) * y[i] + alpha * x[i]
  void (*lerp)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i (c + num[i]) / (c + den[i])
  double (*ratio_sum)(double c, const double* num, const double* den, std::size_t n);
  // out[i] = 1 / (c + x[i])
  void (*offset_reciprocal)(double c, const double* x, double* out, std::size_t n);
  // sum_i p[i] * (v[i] - center)^2
  double (*centered_moment)(const double* p, const double* v, double center, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the binary was built without AVX2 support or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

/// Table used by the library. Resolved on first use.
const KernelTable& active_kernels();

/// Overrides the active table; "scalar" or "avx2". Returns false if unavailable.
bool select_kernels(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline void lerp(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().lerp(alpha, x.data(), y.data(), x.size());
}

inline double ratio_sum(double c, std::span<const double> num, std::span<const double> den) {
  return active_kernels().ratio_sum(c, num.data(), den.data(), num.size());
}

inline void offset_reciprocal(double c, std::span<const double> x, std::span<double> out) {
  active_kernels().offset_reciprocal(c, x.data(), out.data(), x.size());
}

/// Variance of v under the (possibly all-zero) weight vector p.
inline double weighted_variance(std::span<const double> p, std::span<const double> v) {
  const auto& k = active_kernels();
  const double mean = k.dot(p.data(), v.data(), p.size());
  return k.centered_moment(p.data(), v.data(), mean, p.size());
}

}  // namespace rax::simd
