// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace rax::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum(acc) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void lerp_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const double keep = 1.0 - alpha;
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vk = _mm256_set1_pd(keep);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d scaled = _mm256_mul_pd(vk, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), scaled));
  }
  for (; i < n; ++i) y[i] = keep * y[i] + alpha * x[i];
}

double ratio_sum_avx2(double c, const double* num, const double* den, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d top = _mm256_add_pd(vc, _mm256_loadu_pd(num + i));
    const __m256d bottom = _mm256_add_pd(vc, _mm256_loadu_pd(den + i));
    acc = _mm256_add_pd(acc, _mm256_div_pd(top, bottom));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += (c + num[i]) / (c + den[i]);
  return hsum(acc) + tail;
}

void offset_reciprocal_avx2(double c, const double* x, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_add_pd(vc, _mm256_loadu_pd(x + i))));
  }
  for (; i < n; ++i) out[i] = 1.0 / (c + x[i]);
}

double centered_moment_avx2(const double* p, const double* v, double center, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), vc);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(p + i), d), d, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double d = v[i] - center;
    tail += p[i] * d * d;
  }
  return hsum(acc) + tail;
}

}  // namespace

const KernelTable kAvx2Table{
    "avx2",         dot_avx2,       axpy_avx2, lerp_avx2, ratio_sum_avx2,
    offset_reciprocal_avx2, centered_moment_avx2,
};

}  // namespace rax::simd::detail
