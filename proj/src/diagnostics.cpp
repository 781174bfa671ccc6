#include "agmmh/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "agmmh/kernels.hpp"

namespace agmmh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vector extract_coordinate(const std::vector<Vector>& chain, std::size_t k) {
  Vector out(chain.size());
  for (std::size_t t = 0; t < chain.size(); ++t) out[t] = chain[t][k];
  return out;
}

}  // namespace

std::vector<double> lag1_correlation(const std::vector<Vector>& chain) {
  if (chain.size() < 3) throw std::invalid_argument("lag1_correlation: need at least 3 states");
  const std::size_t d = chain.front().size();
  const std::size_t n = chain.size() - 1;  // number of (x_t, x_{t+1}) pairs

  std::vector<double> corr(d, kNaN);
  for (std::size_t k = 0; k < d; ++k) {
    const Vector col = extract_coordinate(chain, k);
    const std::span<const double> a(col.data(), n);
    const std::span<const double> b(col.data() + 1, n);

    const double sa = kernels::sum(a);
    const double sb = kernels::sum(b);
    const double saa = kernels::dot(a, a);
    const double sbb = kernels::dot(b, b);
    const double sab = kernels::dot(a, b);

    const double inv_n = 1.0 / static_cast<double>(n);
    const double var_a = saa - sa * sa * inv_n;
    const double var_b = sbb - sb * sb * inv_n;
    const double cov = sab - sa * sb * inv_n;

    const double floor = 1e-30 * std::max(1.0, std::max(saa, sbb));
    if (!(var_a > floor) || !(var_b > floor)) continue;  // degenerate: stays NaN

    double r = cov / std::sqrt(var_a * var_b);
    if (r > 1.0) r = 1.0;
    if (r < -1.0) r = -1.0;
    corr[k] = r;
  }
  return corr;
}

double mse_over_runs(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("mse_over_runs: need at least one estimate");
  Vector diff(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) diff[i] = estimates[i] - truth;
  return kernels::dot(diff, diff) / static_cast<double>(estimates.size());
}

ZEstimate estimate_normalizing_constant(const TargetModel& target,
                                        const MixtureProposal& q_final,
                                        std::size_t n_draws, RandomStream& rng) {
  if (n_draws == 0) throw std::invalid_argument("estimate_normalizing_constant: need draws");
  if (q_final.dim() != target.dim)
    throw std::invalid_argument("estimate_normalizing_constant: dimension mismatch");

  Vector log_ratio(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const Vector x = mixture_sample(q_final, rng);
    log_ratio[i] = target.log_density_at(x) - mixture_log_density(x, q_final);
  }

  const double lse = kernels::log_sum_exp(log_ratio);
  ZEstimate est;
  est.z = std::exp(lse - std::log(static_cast<double>(n_draws)));

  // ESS of the self-normalized weights: 1 / sum of squared normalized weights.
  double sum_sq = 0.0;
  for (double lr : log_ratio) {
    const double u = std::exp(lr - lse);
    sum_sq += u * u;
  }
  est.ess = 1.0 / sum_sq;
  est.flagged = est.ess < 0.01 * static_cast<double>(n_draws);
  return est;
}

std::vector<double> alpha_trace_average(const std::vector<std::vector<double>>& alpha_per_run) {
  if (alpha_per_run.empty()) throw std::invalid_argument("alpha_trace_average: no runs");
  const std::size_t t = alpha_per_run.front().size();
  for (const auto& run : alpha_per_run)
    if (run.size() != t) throw std::invalid_argument("alpha_trace_average: unequal run lengths");

  std::vector<double> acc(t, 0.0);
  for (const auto& run : alpha_per_run) kernels::add_scaled(acc, 1.0, run);
  const double inv_r = 1.0 / static_cast<double>(alpha_per_run.size());
  for (double& v : acc) v *= inv_r;
  return acc;
}

Vector chain_mean(const std::vector<Vector>& chain) {
  if (chain.empty()) throw std::invalid_argument("chain_mean: empty chain");
  const std::size_t d = chain.front().size();
  Vector mean(d);
  for (std::size_t k = 0; k < d; ++k) {
    const Vector col = extract_coordinate(chain, k);
    mean[k] = kernels::sum(col) / static_cast<double>(chain.size());
  }
  return mean;
}

}  // namespace agmmh
