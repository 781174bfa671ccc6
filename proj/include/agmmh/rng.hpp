#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace agmmh {

/// Seeded random stream with a fixed draw discipline: every public draw
/// consumes exactly one engine output, so sequences are reproducible and
/// draw counts can be audited.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via the inverse CDF (one draw per variate).
  double normal();

  /// Index k with probability weights[k] / sum(weights). One draw.
  /// Zero-weight entries are never selected. Throws if the total is not
  /// positive and finite.
  std::size_t categorical(std::span<const double> weights);

  /// Number of draws consumed so far.
  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

/// Stateless per-index seed derivation (splitmix-style mixing), used to give
/// every run and every sub-stream its own independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Inverse of the standard normal CDF, accurate to full double precision
/// for p in (0, 1). Exposed for direct testing against erf-based round trips.
double inverse_normal_cdf(double p);

}  // namespace agmmh
