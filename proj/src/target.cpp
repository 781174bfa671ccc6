#include "agmmh/target.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace agmmh {

bool Box::contains(const Vector& x) const {
  if (x.size() != lo.size()) throw std::invalid_argument("Box: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

void Box::validate() const {
  if (lo.empty() || lo.size() != hi.size())
    throw std::invalid_argument("Box: lo/hi must be non-empty and equally sized");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
      throw std::invalid_argument("Box: needs finite lo < hi per axis");
  }
}

double TargetModel::log_density_at(const Vector& x) const {
  if (x.size() != dim) throw std::invalid_argument("TargetModel: dimension mismatch");
  if (!in_support(x)) return -std::numeric_limits<double>::infinity();
  return log_density(x);
}

TargetModel quartic_bimodal() {
  TargetModel t;
  t.dim = 1;
  t.log_density = [](const Vector& x) {
    const double u = x[0] * x[0] - 4.0;
    return -u * u / 4.0;
  };
  return t;
}

void MixtureTargetSpec::validate() const {
  if (means.empty()) throw std::invalid_argument("MixtureTargetSpec: needs at least one component");
  if (weights.size() != means.size() || covariances.size() != means.size())
    throw std::invalid_argument("MixtureTargetSpec: weights/means/covariances size mismatch");
  const std::size_t d = means.front().size();
  if (d == 0) throw std::invalid_argument("MixtureTargetSpec: zero-dimensional mean");
  double total = 0.0;
  for (double a : weights) {
    if (!(a >= 0.0)) throw std::invalid_argument("MixtureTargetSpec: negative or NaN weight");
    total += a;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("MixtureTargetSpec: weights must sum to 1");
  for (const auto& m : means)
    if (m.size() != d) throw std::invalid_argument("MixtureTargetSpec: inconsistent mean dimensions");
  for (const auto& c : covariances)
    if (c.rows() != d || c.cols() != d)
      throw std::invalid_argument("MixtureTargetSpec: inconsistent covariance dimensions");
}

Vector MixtureTargetSpec::mean() const {
  const std::size_t d = dim();
  Vector m(d, 0.0);
  for (std::size_t i = 0; i < means.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) m[k] += weights[i] * means[i][k];
  return m;
}

TargetModel gaussian_mixture_target(const MixtureTargetSpec& spec) {
  spec.validate();

  auto mixture = std::make_shared<MixtureProposal>();
  mixture->weights = spec.weights;
  // Exact renormalization so the exposed density truly integrates to 1.
  double total = 0.0;
  for (double a : mixture->weights) total += a;
  for (double& a : mixture->weights) a /= total;
  mixture->components.reserve(spec.means.size());
  for (std::size_t i = 0; i < spec.means.size(); ++i)
    mixture->components.push_back({spec.means[i], Covariance(spec.covariances[i]), 1});
  mixture->validate();

  TargetModel t;
  t.dim = spec.dim();
  t.log_density = [mixture](const Vector& x) { return mixture_log_density(x, *mixture); };
  return t;
}

}  // namespace agmmh
