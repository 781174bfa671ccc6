#include "agmmh/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "kernels_table.hpp"

namespace agmmh::kernels {

namespace {

double scalar_sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double scalar_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double scalar_dot3(const double* a, const double* b, const double* c,
                   std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

double scalar_max(const double* a, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] > m) m = a[i];
  return m;
}

void scalar_add_scaled(double* y, double alpha, const double* x,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scalar_mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

constexpr KernelTable kScalarTable = {
    scalar_sum, scalar_dot, scalar_dot3, scalar_max, scalar_add_scaled,
    scalar_mul,
};

struct Dispatch {
  const KernelTable* table;
  Backend backend;
};

Dispatch pick_default() {
  if (const char* env = std::getenv("AGMMH_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return {&kScalarTable, Backend::scalar};
    if (std::strcmp(env, "avx2") == 0 && avx2_table() != nullptr)
      return {avx2_table(), Backend::avx2};
    if (std::strcmp(env, "neon") == 0 && neon_table() != nullptr)
      return {neon_table(), Backend::neon};
  }
  if (const KernelTable* t = avx2_table()) return {t, Backend::avx2};
  if (const KernelTable* t = neon_table()) return {t, Backend::neon};
  return {&kScalarTable, Backend::scalar};
}

Dispatch& dispatch() {
  static Dispatch d = pick_default();
  return d;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: span size mismatch");
}

}  // namespace

const KernelTable& scalar_table() { return kScalarTable; }

double sum(std::span<const double> a) {
  return dispatch().table->sum(a.data(), a.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return dispatch().table->dot(a.data(), b.data(), a.size());
}

double dot3(std::span<const double> a, std::span<const double> b,
            std::span<const double> c) {
  require_same_size(a.size(), b.size());
  require_same_size(a.size(), c.size());
  return dispatch().table->dot3(a.data(), b.data(), c.data(), a.size());
}

double max(std::span<const double> a) {
  return dispatch().table->max(a.data(), a.size());
}

void add_scaled(std::span<double> y, double alpha, std::span<const double> x) {
  require_same_size(y.size(), x.size());
  dispatch().table->add_scaled(y.data(), alpha, x.data(), x.size());
}

void mul(std::span<const double> a, std::span<const double> b,
         std::span<double> out) {
  require_same_size(a.size(), b.size());
  require_same_size(a.size(), out.size());
  dispatch().table->mul(a.data(), b.data(), out.data(), a.size());
}

double log_sum_exp(std::span<const double> a) {
  const double shift = max(a);
  if (std::isinf(shift) && shift < 0.0) return shift;  // empty or all -inf
  double acc = 0.0;
  for (double v : a) acc += std::exp(v - shift);
  return shift + std::log(acc);
}

Backend active_backend() { return dispatch().backend; }

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return avx2_table() != nullptr;
    case Backend::neon: return neon_table() != nullptr;
  }
  return false;
}

void force_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      dispatch() = {&kScalarTable, Backend::scalar};
      return;
    case Backend::avx2:
      if (const KernelTable* t = avx2_table()) {
        dispatch() = {t, Backend::avx2};
        return;
      }
      break;
    case Backend::neon:
      if (const KernelTable* t = neon_table()) {
        dispatch() = {t, Backend::neon};
        return;
      }
      break;
  }
  throw std::invalid_argument("force_backend: backend not available");
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

}  // namespace agmmh::kernels
