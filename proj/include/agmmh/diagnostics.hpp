#pragma once

#include <span>
#include <vector>

#include "agmmh/gaussian.hpp"
#include "agmmh/rng.hpp"
#include "agmmh/sampler.hpp"
#include "agmmh/target.hpp"

namespace agmmh {

/// Per-coordinate Pearson correlation between consecutive chain states
/// (x_t, x_{t+1}). A coordinate with zero variance has no defined
/// correlation and is reported as NaN, never silently 0.
std::vector<double> lag1_correlation(const std::vector<Vector>& chain);

/// (1/R) sum_r (estimate_r - truth)^2.
double mse_over_runs(std::span<const double> estimates, double truth);

struct ZEstimate {
  double z = 0.0;
  double ess = 0.0;    // effective sample size of the importance weights
  bool flagged = false;  // ess below 1% of the draw count
};

/// Importance-sampling estimate of the target's normalizing constant using
/// fresh draws from the (post-adaptation) proposal:
/// Z ~= (1/n) sum_i p(x_i) / q(x_i), accumulated in log space.
ZEstimate estimate_normalizing_constant(const TargetModel& target,
                                        const MixtureProposal& q_final,
                                        std::size_t n_draws, RandomStream& rng);

/// Per-iteration mean of the acceptance probability across equal-length runs.
std::vector<double> alpha_trace_average(const std::vector<std::vector<double>>& alpha_per_run);

/// Everything the experiment harness reports about one finished chain.
struct RunSummary {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  Vector mean_estimate;
  double z_estimate = 0.0;
  double z_ess = 0.0;
  bool z_flagged = false;
  std::vector<double> lag1_corr;
  double accept_rate_overall = 0.0;
  std::vector<double> alpha_trace;
  MixtureProposal initial_proposal;
  MixtureProposal final_proposal;
};

/// Mean over all generated samples (no burn-in discard), per coordinate.
Vector chain_mean(const std::vector<Vector>& chain);

}  // namespace agmmh
