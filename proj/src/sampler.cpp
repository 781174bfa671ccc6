#include "agmmh/sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace agmmh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void publish_covariance(GaussianComponent& comp, Matrix cov, double epsilon) {
  auto cv = Covariance::from_matrix(cov);
  if (!cv) {
    // One symmetrize-and-regularize retry; a second failure means the
    // update itself is broken and must not be papered over.
    Matrix repaired = 0.5 * (cov + transpose(cov)) + (10.0 * epsilon) * Matrix::identity(cov.rows());
    cv = Covariance::from_matrix(repaired);
    if (!cv) throw std::runtime_error("sampler: covariance update lost positive definiteness");
  }
  comp.cov = std::move(*cv);
}

void refresh_weights(MixtureProposal& proposal, const std::vector<ComponentStats>& stats) {
  std::uint64_t total = 0;
  for (const auto& s : stats) total += s.m;
  for (std::size_t i = 0; i < stats.size(); ++i)
    proposal.weights[i] = static_cast<double>(stats[i].m) / static_cast<double>(total);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void SamplerConfig::validate(std::size_t dim) const {
  if (n_components < 1) throw std::invalid_argument("SamplerConfig: n_components must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("SamplerConfig: epsilon must be positive");
  if (!(init_sigma2 > 0.0)) throw std::invalid_argument("SamplerConfig: init_sigma2 must be positive");
  if (!(t_train < t_stop && t_stop <= t_tot))
    throw std::invalid_argument("SamplerConfig: need t_train < t_stop <= t_tot");

  if (const auto* em = std::get_if<ExplicitMeans>(&init_means)) {
    if (em->values.size() != n_components)
      throw std::invalid_argument("SamplerConfig: explicit means count must equal n_components");
    for (const auto& v : em->values)
      if (v.size() != dim) throw std::invalid_argument("SamplerConfig: mean dimension mismatch");
  } else if (const auto* cb = std::get_if<ComponentBoxes>(&init_means)) {
    if (cb->boxes.size() != n_components)
      throw std::invalid_argument("SamplerConfig: boxes count must equal n_components");
    for (const auto& b : cb->boxes) {
      b.validate();
      if (b.dim() != dim) throw std::invalid_argument("SamplerConfig: box dimension mismatch");
    }
  } else {
    const auto& sb = std::get<SharedBox>(init_means);
    sb.box.validate();
    if (sb.box.dim() != dim) throw std::invalid_argument("SamplerConfig: box dimension mismatch");
  }

  if (const auto* xe = std::get_if<X0Explicit>(&x0))
    if (xe->value.size() != dim) throw std::invalid_argument("SamplerConfig: x0 dimension mismatch");
}

// ---------------------------------------------------------------------------
// Adaptive state

void ComponentStats::add(const Vector& x) {
  if (m == 0) {
    m = 1;
    mean = x;
    scatter = Matrix(x.size(), x.size());
    return;
  }
  m += 1;
  const std::size_t d = x.size();
  Vector delta(d);
  for (std::size_t i = 0; i < d; ++i) delta[i] = x[i] - mean[i];
  for (std::size_t i = 0; i < d; ++i) mean[i] += delta[i] / static_cast<double>(m);
  Vector delta2(d);
  for (std::size_t i = 0; i < d; ++i) delta2[i] = x[i] - mean[i];
  add_outer_symmetric(scatter, delta, delta2);
}

AdaptiveState AdaptiveState::init(MixtureProposal q0, bool track) {
  q0.validate();
  AdaptiveState st;
  st.track_history = track;
  st.stats.resize(q0.size());
  for (std::size_t i = 0; i < q0.size(); ++i) {
    st.stats[i].add(q0.components[i].mean);  // s_i^(1) = mu_i^(0), m_i = 1
    q0.components[i].count = 1;
  }
  if (track) {
    st.history.resize(q0.size());
    for (std::size_t i = 0; i < q0.size(); ++i) st.history[i] = {q0.components[i].mean};
  }
  st.proposal = std::move(q0);
  return st;
}

void AdaptiveState::append(std::size_t j, const Vector& x) {
  stats[j].add(x);
  proposal.components[j].count = stats[j].m;
  if (track_history) history[j].push_back(x);
  ++assignments;
}

std::uint64_t AdaptiveState::total_count() const {
  std::uint64_t total = 0;
  for (const auto& s : stats) total += s.m;
  return total;
}

void AdaptiveState::update_block(std::size_t j, double epsilon) {
  if (!track_history) throw std::logic_error("update_block: requires track_history");
  const auto& cols = history[j];
  const std::size_t m = cols.size();
  const std::size_t d = proposal.dim();

  Vector mean(d, 0.0);
  for (const auto& col : cols)
    for (std::size_t k = 0; k < d; ++k) mean[k] += col[k];
  for (std::size_t k = 0; k < d; ++k) mean[k] /= static_cast<double>(m);
  proposal.components[j].mean = mean;

  if (m >= 2) {
    Matrix cov(d, d);
    for (const auto& col : cols) {
      Vector centered(d);
      for (std::size_t k = 0; k < d; ++k) centered[k] = col[k] - mean[k];
      add_outer_symmetric(cov, centered, centered);
    }
    const double denom = static_cast<double>(m - 1);
    for (double& v : cov.data()) v /= denom;
    cov = cov + epsilon * Matrix::identity(d);
    publish_covariance(proposal.components[j], std::move(cov), epsilon);
  }

  refresh_weights(proposal, stats);
}

void AdaptiveState::update_recursive(std::size_t j, double epsilon) {
  const ComponentStats& s = stats[j];
  proposal.components[j].mean = s.mean;

  if (s.m >= 2) {
    const double denom = static_cast<double>(s.m - 1);
    Matrix cov = s.scatter;
    for (double& v : cov.data()) v /= denom;
    cov = cov + epsilon * Matrix::identity(cov.rows());
    publish_covariance(proposal.components[j], std::move(cov), epsilon);
  }

  refresh_weights(proposal, stats);
}

// ---------------------------------------------------------------------------
// Operations

double acceptance_probability(const Vector& x_curr, const Vector& x_prop,
                              const TargetModel& target, const MixtureProposal& q) {
  const double log_p_curr = target.log_density_at(x_curr);
  if (!std::isfinite(log_p_curr))
    throw std::domain_error("acceptance_probability: current state has zero target density");

  const double log_p_prop = target.log_density_at(x_prop);
  if (log_p_prop == kNegInf) return 0.0;

  const double log_q_curr = mixture_log_density(x_curr, q);
  const double log_q_prop = mixture_log_density(x_prop, q);

  const double log_ratio = (log_p_prop + log_q_curr) - (log_p_curr + log_q_prop);
  if (log_ratio >= 0.0) return 1.0;
  return std::exp(log_ratio);
}

std::size_t assign_component(const Vector& x, const MixtureProposal& q) {
  const std::size_t d = x.size();
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Vector& mu = q.components[i].mean;
    double dist = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = mu[k] - x[k];
      dist += diff * diff;
    }
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

namespace {

ChainRecord propose_accept(Vector& x, const MixtureProposal& q, const TargetModel& target,
                           std::uint64_t t, RandomStream& rng) {
  ChainRecord rec;
  rec.t = t;
  rec.proposed = mixture_sample(q, rng);
  rec.alpha = acceptance_probability(x, rec.proposed, target, q);
  rec.accepted = rng.uniform01() < rec.alpha;
  if (rec.accepted) x = rec.proposed;
  rec.state = x;
  return rec;
}

}  // namespace

ChainRecord agm_step(AdaptiveState& state, Vector& x, const TargetModel& target,
                     const SamplerConfig& cfg, RandomStream& rng) {
  const std::uint64_t t = state.t;
  ChainRecord rec = propose_accept(x, state.proposal, target, t, rng);

  if (t < cfg.t_stop) {
    const std::size_t j = assign_component(x, state.proposal);
    state.append(j, x);
    rec.assigned = static_cast<std::int64_t>(j);
    if (t > cfg.t_train) state.update_recursive(j, cfg.epsilon);
  }

  state.t = t + 1;
  return rec;
}

ChainRecord baseline_step(Vector& x, const MixtureProposal& q_fixed,
                          const TargetModel& target, RandomStream& rng) {
  return propose_accept(x, q_fixed, target, 0, rng);
}

// ---------------------------------------------------------------------------
// Chain drivers

MixtureProposal build_initial_proposal(const SamplerConfig& cfg, std::size_t dim,
                                       RandomStream& rng) {
  MixtureProposal q;
  q.weights.assign(cfg.n_components, 1.0 / static_cast<double>(cfg.n_components));
  q.components.reserve(cfg.n_components);

  std::vector<Vector> means;
  if (const auto* em = std::get_if<ExplicitMeans>(&cfg.init_means)) {
    means = em->values;
  } else if (const auto* cb = std::get_if<ComponentBoxes>(&cfg.init_means)) {
    for (const Box& b : cb->boxes) {
      Vector mu(dim);
      for (std::size_t k = 0; k < dim; ++k) mu[k] = rng.uniform(b.lo[k], b.hi[k]);
      means.push_back(std::move(mu));
    }
  } else {
    const Box& b = std::get<SharedBox>(cfg.init_means).box;
    for (std::size_t i = 0; i < cfg.n_components; ++i) {
      Vector mu(dim);
      for (std::size_t k = 0; k < dim; ++k) mu[k] = rng.uniform(b.lo[k], b.hi[k]);
      means.push_back(std::move(mu));
    }
  }

  for (auto& mu : means)
    q.components.push_back({std::move(mu), Covariance::isotropic(dim, cfg.init_sigma2), 1});
  q.validate();
  return q;
}

Vector draw_x0(const SamplerConfig& cfg, std::size_t dim, RandomStream& rng) {
  if (const auto* xe = std::get_if<X0Explicit>(&cfg.x0)) return xe->value;
  Vector x(dim);
  for (std::size_t k = 0; k < dim; ++k) x[k] = rng.normal();
  return x;
}

namespace {

ChainResult run_chain_impl(const TargetModel& target, const SamplerConfig& cfg, bool adaptive) {
  RandomStream rng(cfg.seed);
  MixtureProposal q0 = build_initial_proposal(cfg, target.dim, rng);
  Vector x = draw_x0(cfg, target.dim, rng);

  ChainResult result;
  result.initial_proposal = q0;
  result.x0 = x;
  result.states.reserve(cfg.t_tot);
  result.records.reserve(cfg.t_tot);

  if (adaptive) {
    AdaptiveState state = AdaptiveState::init(std::move(q0), cfg.track_history);
    for (std::uint64_t t = 0; t < cfg.t_tot; ++t) {
      result.records.push_back(agm_step(state, x, target, cfg, rng));
      result.states.push_back(x);
    }
    result.final_proposal = std::move(state.proposal);
  } else {
    for (std::uint64_t t = 0; t < cfg.t_tot; ++t) {
      ChainRecord rec = baseline_step(x, q0, target, rng);
      rec.t = t;
      result.records.push_back(std::move(rec));
      result.states.push_back(x);
    }
    result.final_proposal = std::move(q0);
  }
  return result;
}

}  // namespace

ChainResult run_agm_chain(const TargetModel& target, const SamplerConfig& cfg) {
  cfg.validate(target.dim);
  return run_chain_impl(target, cfg, true);
}

ChainResult run_baseline_chain(const TargetModel& target, const SamplerConfig& cfg) {
  if (cfg.t_tot == 0) throw std::invalid_argument("run_baseline_chain: t_tot must be >= 1");
  return run_chain_impl(target, cfg, false);
}

SamplerConfig blackbox_init(std::size_t dim, const Box& box, std::size_t n_components,
                            RandomStream& rng) {
  box.validate();
  if (box.dim() != dim) throw std::invalid_argument("blackbox_init: box dimension mismatch");
  if (n_components < 1) throw std::invalid_argument("blackbox_init: need at least one component");

  SamplerConfig cfg;
  cfg.n_components = n_components;
  cfg.t_train = 100 * static_cast<std::uint64_t>(dim);
  cfg.t_tot = cfg.t_train + 5000;
  cfg.t_stop = cfg.t_tot;
  cfg.init_sigma2 = 10.0;

  ExplicitMeans means;
  means.values.reserve(n_components);
  for (std::size_t i = 0; i < n_components; ++i) {
    Vector mu(dim);
    for (std::size_t k = 0; k < dim; ++k) mu[k] = rng.uniform(box.lo[k], box.hi[k]);
    means.values.push_back(std::move(mu));
  }
  cfg.init_means = std::move(means);
  return cfg;
}

}  // namespace agmmh
