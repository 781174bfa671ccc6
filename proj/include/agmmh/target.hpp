#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "agmmh/gaussian.hpp"
#include "agmmh/linalg.hpp"

namespace agmmh {

/// Axis-aligned box, lo[i] <= x[i] <= hi[i].
struct Box {
  Vector lo;
  Vector hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const Vector& x) const;
  void validate() const;
};

/// A target density known up to a normalizing constant: the samplers only
/// ever see the unnormalized log-density. Support is either an axis-aligned
/// box or all of R^d.
struct TargetModel {
  std::size_t dim = 0;
  std::function<double(const Vector&)> log_density;  // unnormalized
  std::optional<Box> support;                        // nullopt: all of R^d

  bool in_support(const Vector& x) const {
    return !support || support->contains(x);
  }

  /// Unnormalized log-density; -inf outside the support box.
  double log_density_at(const Vector& x) const;
};

/// 1-D bimodal target log p(x) = -(x^2 - 4)^2 / 4, modes at +-2.
TargetModel quartic_bimodal();

/// Parameters of a Gaussian-mixture target.
struct MixtureTargetSpec {
  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;

  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
  void validate() const;

  /// Analytic mixture mean, sum_i a_i eta_i.
  Vector mean() const;
};

/// Normalized mixture target: log sum_i a_i N(x | eta_i, Sigma_i). The true
/// normalizing constant of the exposed log-density is 1.
TargetModel gaussian_mixture_target(const MixtureTargetSpec& spec);

}  // namespace agmmh
