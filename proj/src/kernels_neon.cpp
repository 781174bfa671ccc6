#include "kernels_table.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <limits>

namespace agmmh::kernels {

namespace {

double neon_sum(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

double neon_dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double neon_dot3(const double* a, const double* b, const double* c,
                 std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, ab, vld1q_f64(c + i));
  }
  double r = vaddvq_f64(acc);
  for (; i < n; ++i) r += a[i] * b[i] * c[i];
  return r;
}

double neon_max(const double* a, std::size_t n) {
  double r = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t acc = vld1q_f64(a);
    for (i = 2; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(a + i));
    r = vmaxvq_f64(acc);
  }
  for (; i < n; ++i)
    if (a[i] > r) r = a[i];
  return r;
}

void neon_add_scaled(double* y, double alpha, const double* x, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i));
    vst1q_f64(y + i, v);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void neon_mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr KernelTable kNeonTable = {
    neon_sum, neon_dot, neon_dot3, neon_max, neon_add_scaled, neon_mul,
};

}  // namespace

const KernelTable* neon_table() { return &kNeonTable; }

}  // namespace agmmh::kernels

#else

namespace agmmh::kernels {

const KernelTable* neon_table() { return nullptr; }

}  // namespace agmmh::kernels

#endif
