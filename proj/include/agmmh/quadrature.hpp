#pragma once

#include <cstddef>

#include "agmmh/linalg.hpp"
#include "agmmh/target.hpp"

namespace agmmh {

struct QuadratureResult {
  double z = 0.0;   // normalizing constant of the unnormalized density
  Vector mean;
  Matrix cov;
  std::size_t intervals = 0;  // grid that produced the accepted result
};

/// Trapezoidal-rule normalizing constant and first two moments over an
/// axis-aligned box (1-D or 2-D). The grid is refined 2x until doubling it
/// changes z, mean, and cov by less than tol; failure to converge within a
/// few refinements throws std::runtime_error with the residual change.
///
/// This is the ground-truth oracle for the acceptance tests; it never feeds
/// back into the samplers.
QuadratureResult quadrature_moments(const TargetModel& target, const Box& box,
                                    std::size_t intervals, double tol = 1e-8);

}  // namespace agmmh
