#include "kernels_table.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <limits>

namespace agmmh::kernels {

namespace {

double hadd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double avx2_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double r = hadd(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double r = hadd(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double avx2_dot3(const double* a, const double* b, const double* c,
                 std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
  }
  double r = hadd(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i];
  return r;
}

double avx2_max(const double* a, std::size_t n) {
  double r = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(a);
    for (i = 4; i + 4 <= n; i += 4)
      acc = _mm256_max_pd(acc, _mm256_loadu_pd(a + i));
    r = hmax(acc);
  }
  for (; i < n; ++i)
    if (a[i] > r) r = a[i];
  return r;
}

void avx2_add_scaled(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void avx2_mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                   _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr KernelTable kAvx2Table = {
    avx2_sum, avx2_dot, avx2_dot3, avx2_max, avx2_add_scaled, avx2_mul,
};

}  // namespace

const KernelTable* avx2_table() {
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2Table : nullptr;
}

}  // namespace agmmh::kernels

#else

namespace agmmh::kernels {

const KernelTable* avx2_table() { return nullptr; }

}  // namespace agmmh::kernels

#endif
