#include "kernels_impl.hpp"

namespace rax::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_scalar(double alpha, const double* x, double* y, std::size_t n) {
  const double keep = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) y[i] = keep * y[i] + alpha * x[i];
}

double ratio_sum_scalar(double c, const double* num, const double* den, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (c + num[i]) / (c + den[i]);
  return acc;
}

void offset_reciprocal_scalar(double c, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (c + x[i]);
}

double centered_moment_scalar(const double* p, const double* v, double center, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - center;
    acc += p[i] * d * d;
  }
  return acc;
}

}  // namespace

const KernelTable kScalarTable{
    "scalar",         dot_scalar,       axpy_scalar, lerp_scalar, ratio_sum_scalar,
    offset_reciprocal_scalar, centered_moment_scalar,
};

}  // namespace rax::simd::detail
