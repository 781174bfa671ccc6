#pragma once

#include <cstddef>
#include <span>

namespace agmmh::kernels {

// Data-parallel reduction and map primitives used by the diagnostics,
// quadrature, and importance-sampling layers. Each operation has a scalar
// reference implementation plus SIMD variants (AVX2 on x86-64, NEON on
// AArch64) selected once at runtime from CPU capabilities. SIMD reductions
// reassociate, so results may differ from the scalar reference by normal
// floating-point rounding; the equivalence tests bound that difference.

enum class Backend { scalar, avx2, neon };

/// sum_i a[i]; 0 for an empty span.
double sum(std::span<const double> a);

/// sum_i a[i] * b[i]; sizes must match.
double dot(std::span<const double> a, std::span<const double> b);

/// sum_i a[i] * b[i] * c[i]; sizes must match.
double dot3(std::span<const double> a, std::span<const double> b,
            std::span<const double> c);

/// max_i a[i]; -inf for an empty span. Entries of -inf are allowed.
double max(std::span<const double> a);

/// y[i] += alpha * x[i]; sizes must match.
void add_scaled(std::span<double> y, double alpha, std::span<const double> x);

/// out[i] = a[i] * b[i]; sizes must match.
void mul(std::span<const double> a, std::span<const double> b,
         std::span<double> out);

/// log(sum_i exp(a[i])), max-shifted; -inf for an empty span or when every
/// entry is -inf. Composed from max and a shifted exponential sum.
double log_sum_exp(std::span<const double> a);

/// Backend currently driving the primitives above.
Backend active_backend();

/// Override the dispatch choice (used by equivalence tests). Throws
/// std::invalid_argument if the backend is not available on this machine.
void force_backend(Backend b);

bool backend_available(Backend b);

const char* backend_name(Backend b);

}  // namespace agmmh::kernels
