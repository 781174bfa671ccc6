#include "agmmh/gaussian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace agmmh {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

void check_finite(const Vector& x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

std::optional<Covariance> Covariance::from_matrix(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw std::invalid_argument("Covariance: matrix must be square and non-empty");
  const std::size_t n = entries.rows();

  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::fabs(entries(i, j) - entries(j, i)));
  const double scale = max_abs(entries);
  if (asym > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("Covariance: matrix is not symmetric");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (entries(i, j) + entries(j, i));
      entries(i, j) = avg;
      entries(j, i) = avg;
    }

  auto l = cholesky(entries);
  if (!l) return std::nullopt;

  double log_det = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_det += std::log((*l)(i, i));
  log_det *= 2.0;

  return Covariance(std::move(entries), std::move(*l), log_det);
}

Covariance::Covariance(Matrix entries) : entries_(), chol_(), log_det_(0.0) {
  auto c = from_matrix(std::move(entries));
  if (!c) throw std::invalid_argument("Covariance: matrix is not positive definite");
  *this = std::move(*c);
}

Covariance Covariance::isotropic(std::size_t dim, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("Covariance: sigma2 must be positive");
  return Covariance(sigma2 * Matrix::identity(dim));
}

double gaussian_log_density(const Vector& x, const GaussianComponent& g) {
  const std::size_t d = g.mean.size();
  if (x.size() != d) throw std::invalid_argument("gaussian_log_density: dimension mismatch");
  if (g.cov.dim() != d) throw std::invalid_argument("gaussian_log_density: covariance dimension mismatch");
  check_finite(x, "gaussian_log_density");

  Vector diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - g.mean[i];
  const Vector v = solve_lower(g.cov.chol(), diff);
  double quad = 0.0;
  for (double vi : v) quad += vi * vi;

  return -0.5 * (static_cast<double>(d) * kLog2Pi + g.cov.log_det() + quad);
}

void MixtureProposal::validate() const {
  if (components.empty()) throw std::invalid_argument("MixtureProposal: needs at least one component");
  if (weights.size() != components.size())
    throw std::invalid_argument("MixtureProposal: weights/components size mismatch");
  const std::size_t d = components.front().mean.size();
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("MixtureProposal: negative or NaN weight");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("MixtureProposal: weights must sum to 1");
  for (const auto& c : components) {
    if (c.mean.size() != d || c.cov.dim() != d)
      throw std::invalid_argument("MixtureProposal: inconsistent component dimensions");
    if (c.count < 1) throw std::invalid_argument("MixtureProposal: component count must be >= 1");
  }
}

double mixture_log_density(const Vector& x, const MixtureProposal& q) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("mixture_log_density: empty mixture");

  double best = -std::numeric_limits<double>::infinity();
  // Stack-friendly for the usual small N; falls back to heap above that.
  std::vector<double> terms(n, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = q.weights[i];
    if (w <= 0.0) continue;
    any = true;
    terms[i] = std::log(w) + gaussian_log_density(x, q.components[i]);
    if (terms[i] > best) best = terms[i];
  }
  if (!any) throw std::invalid_argument("mixture_log_density: all weights are zero");
  if (std::isinf(best)) return best;

  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - best);
  return best + std::log(acc);
}

Vector mixture_sample(const MixtureProposal& q, RandomStream& rng) {
  const std::size_t k = rng.categorical(q.weights);
  const GaussianComponent& g = q.components[k];
  const std::size_t d = g.mean.size();

  Vector z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
  Vector x = lower_times(g.cov.chol(), z);
  for (std::size_t i = 0; i < d; ++i) x[i] += g.mean[i];
  return x;
}

}  // namespace agmmh
