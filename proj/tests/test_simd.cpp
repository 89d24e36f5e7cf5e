#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rax/simd.hpp"

using rax::simd::KernelTable;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& gen, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = unif(gen);
  return v;
}

// Reductions are reassociated by the vector path; compare against the sum of magnitudes.
void check_close(double got, double want, double scale) {
  CHECK(std::abs(got - want) <= 1e-13 * std::max(1.0, scale));
}

void check_table_against_loops(const KernelTable& k) {
  std::mt19937_64 gen(17);
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto a = random_vector(n, gen);
    const auto b = random_vector(n, gen);
    const auto p = random_vector(n, gen, 0.0, 1.0);

    double dot = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += a[i] * b[i];
      mag += std::abs(a[i] * b[i]);
    }
    check_close(k.dot(a.data(), b.data(), n), dot, mag);

    auto y = b;
    k.axpy(0.3, a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(y[i], b[i] + 0.3 * a[i], 1.0);

    y = b;
    k.lerp(0.25, a.data(), y.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(y[i], 0.75 * b[i] + 0.25 * a[i], 1.0);

    double ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) ratio += (0.01 + p[i]) / (0.01 + p[n - 1 - i]);
    const std::vector<double> rev(p.rbegin(), p.rend());
    check_close(k.ratio_sum(0.01, p.data(), rev.data(), n), ratio, ratio);

    std::vector<double> inv(n);
    k.offset_reciprocal(0.5, p.data(), inv.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(inv[i], 1.0 / (0.5 + p[i]), 2.0);

    double moment = 0.0;
    for (std::size_t i = 0; i < n; ++i) moment += p[i] * (a[i] - 0.2) * (a[i] - 0.2);
    check_close(k.centered_moment(p.data(), a.data(), 0.2, n), moment, moment);
  }
}

}  // namespace

TEST_CASE("scalar kernels match plain loops") { check_table_against_loops(rax::simd::scalar_kernels()); }

TEST_CASE("avx2 kernels match plain loops") {
  const KernelTable* avx2 = rax::simd::avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 variant unavailable on this machine");
    return;
  }
  check_table_against_loops(*avx2);
}

TEST_CASE("avx2 and scalar kernels agree on random inputs") {
  const KernelTable* avx2 = rax::simd::avx2_kernels();
  if (avx2 == nullptr) return;
  const KernelTable& ref = rax::simd::scalar_kernels();
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::size_t> len(0, 37);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = len(gen);
    const auto a = random_vector(n, gen);
    const auto b = random_vector(n, gen);
    const auto p = random_vector(n, gen, 0.0, 1.0);
    const auto q = random_vector(n, gen, 0.0, 1.0);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    check_close(avx2->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), mag);

    auto y1 = b, y2 = b;
    avx2->axpy(-1.7, a.data(), y1.data(), n);
    ref.axpy(-1.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], 4.0);

    y1 = b, y2 = b;
    avx2->lerp(0.6, a.data(), y1.data(), n);
    ref.lerp(0.6, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], 2.0);

    const double r = ref.ratio_sum(1e-3, p.data(), q.data(), n);
    check_close(avx2->ratio_sum(1e-3, p.data(), q.data(), n), r, r);

    std::vector<double> o1(n), o2(n);
    avx2->offset_reciprocal(1e-3, q.data(), o1.data(), n);
    ref.offset_reciprocal(1e-3, q.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(o1[i], o2[i], o2[i]);

    const double m = ref.centered_moment(p.data(), a.data(), -0.4, n);
    check_close(avx2->centered_moment(p.data(), a.data(), -0.4, n), m, m);
  }
}

TEST_CASE("kernel selection") {
  const std::string before = rax::simd::active_kernels().name;
  CHECK(rax::simd::select_kernels("scalar"));
  CHECK(std::string(rax::simd::active_kernels().name) == "scalar");
  CHECK_FALSE(rax::simd::select_kernels("neon"));
  CHECK(std::string(rax::simd::active_kernels().name) == "scalar");
  if (rax::simd::avx2_kernels() != nullptr) {
    CHECK(rax::simd::select_kernels("avx2"));
    CHECK(std::string(rax::simd::active_kernels().name) == "avx2");
  }
  CHECK(rax::simd::select_kernels(before));
}

TEST_CASE("weighted variance of a degenerate row is zero") {
  const std::vector<double> p{0.0, 1.0, 0.0};
  const std::vector<double> v{3.0, 2.0, 7.0};
  CHECK(rax::simd::weighted_variance(p, v) == doctest::Approx(0.0));
  const std::vector<double> half{0.5, 0.5, 0.0};
  CHECK(rax::simd::weighted_variance(half, v) == doctest::Approx(0.25));
}
