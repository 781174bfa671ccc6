#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agmmh/linalg.hpp"
#include "agmmh/rng.hpp"

namespace agmmh {

/// Positive-definite covariance with its Cholesky factor cached at
/// construction. Instances are immutable; density evaluation reuses the
/// cached factor, and updates build a fresh Covariance.
class Covariance {
 public:
  /// Validates symmetry (1e-12 relative), symmetrizes, and factorizes.
  /// Returns nullopt when factorization fails (not positive definite).
  static std::optional<Covariance> from_matrix(Matrix entries);

  /// Same, but a hard failure: throws std::invalid_argument.
  explicit Covariance(Matrix entries);

  static Covariance isotropic(std::size_t dim, double sigma2);

  const Matrix& entries() const { return entries_; }
  const Matrix& chol() const { return chol_; }
  double log_det() const { return log_det_; }
  std::size_t dim() const { return entries_.rows(); }

 private:
  Covariance(Matrix entries, Matrix chol, double log_det)
      : entries_(std::move(entries)), chol_(std::move(chol)), log_det_(log_det) {}

  Matrix entries_;
  Matrix chol_;   // lower triangular, chol * chol' == entries
  double log_det_ = 0.0;
};

/// One mixture component: mean, covariance, and the tally of states assigned
/// to it (the initial mean counts as the first entry, so count starts at 1).
struct GaussianComponent {
  Vector mean;
  Covariance cov;
  std::uint64_t count = 1;
};

/// Log of the fully normalized Gaussian density N(x | mean, cov). The
/// normalization constant matters here: mixture components are compared
/// through their weights, which is only meaningful between normalized
/// densities.
double gaussian_log_density(const Vector& x, const GaussianComponent& g);

/// Weighted Gaussian mixture used as the sampler proposal.
struct MixtureProposal {
  std::vector<double> weights;
  std::vector<GaussianComponent> components;

  std::size_t size() const { return components.size(); }
  std::size_t dim() const { return components.empty() ? 0 : components.front().mean.size(); }

  /// Throws std::invalid_argument on any violated invariant: N >= 1,
  /// matching sizes and dimensions, nonnegative weights summing to 1
  /// within 1e-12.
  void validate() const;
};

/// log sum_i w_i N(x | mean_i, cov_i), evaluated in the log domain with a
/// max shift so widely separated components cannot overflow. Zero-weight
/// components are skipped; all-zero weights are an error.
double mixture_log_density(const Vector& x, const MixtureProposal& q);

/// Draw from the mixture: one categorical draw for the component index,
/// then d standard normal draws mapped through the Cholesky factor.
/// Consumes exactly dim+1 draws from the stream.
Vector mixture_sample(const MixtureProposal& q, RandomStream& rng);

}  // namespace agmmh
