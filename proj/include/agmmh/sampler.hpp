#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "agmmh/gaussian.hpp"
#include "agmmh/rng.hpp"
#include "agmmh/target.hpp"

namespace agmmh {

// ---------------------------------------------------------------------------
// Configuration

struct ExplicitMeans {
  std::vector<Vector> values;
};
struct ComponentBoxes {
  std::vector<Box> boxes;  // one box per component, means drawn uniformly
};
struct SharedBox {
  Box box;  // all means drawn uniformly from the same box
};
using InitMeansPolicy = std::variant<ExplicitMeans, ComponentBoxes, SharedBox>;

struct X0StandardNormal {};
struct X0Explicit {
  Vector value;
};
using X0Policy = std::variant<X0StandardNormal, X0Explicit>;

struct SamplerConfig {
  std::size_t n_components = 1;
  std::uint64_t t_train = 0;
  std::uint64_t t_stop = 0;   // adaptation runs for t < t_stop
  std::uint64_t t_tot = 0;    // chain length
  double epsilon = 1e-6;      // covariance regularizer
  InitMeansPolicy init_means = SharedBox{};
  double init_sigma2 = 10.0;  // C_i^(0) = init_sigma2 * I
  X0Policy x0 = X0StandardNormal{};
  std::uint64_t seed = 0;
  bool track_history = false;  // keep per-component sample columns (testing)

  /// Full adaptive-schedule validation: t_train < t_stop <= t_tot, plus
  /// structural checks against the target dimension.
  void validate(std::size_t dim) const;
};

// ---------------------------------------------------------------------------
// Adaptive state

/// Running sufficient statistics of all columns ever assigned to one
/// component: count m, column mean, and centered scatter, maintained with
/// the standard one-pass (Welford) update. These reproduce the batch column
/// statistics exactly, which is what makes the recursive parameter update
/// agree with the block recomputation at every step.
struct ComponentStats {
  std::uint64_t m = 0;
  Vector mean;
  Matrix scatter;

  void add(const Vector& x);
};

struct ChainRecord {
  std::uint64_t t = 0;  // iteration index, 0-based
  Vector state;         // x_{t+1}
  Vector proposed;      // x'
  double alpha = 0.0;
  bool accepted = false;
  std::int64_t assigned = -1;  // component index, -1 when adaptation is off
};

struct AdaptiveState {
  MixtureProposal proposal;                 // published parameters (used by q)
  std::vector<ComponentStats> stats;        // full-history accumulators
  std::vector<std::vector<Vector>> history; // sample columns, only if tracked
  bool track_history = false;
  std::uint64_t t = 0;
  std::uint64_t assignments = 0;

  static AdaptiveState init(MixtureProposal q0, bool track_history);

  /// Step 3(b): m_j += 1 and append x as a new column of component j.
  void append(std::size_t j, const Vector& x);

  /// Publish component j's parameters from the stored columns: mean as the
  /// column average, covariance as (scatter + (m-1) eps I) / (m-1), and all
  /// weights as m_i / sum_k m_k. Requires track_history.
  void update_block(std::size_t j, double epsilon);

  /// Same published parameters computed from the running accumulators, so
  /// no column storage is needed. Matches update_block to rounding error.
  void update_recursive(std::size_t j, double epsilon);

  std::uint64_t total_count() const;
};

// ---------------------------------------------------------------------------
// Operations

/// The independent-MH acceptance probability
/// min[1, p(x') q(x_t) / (p(x_t) q(x'))], evaluated in log space. A current
/// state with zero target density is an invalid chain state (hard error).
double acceptance_probability(const Vector& x_curr, const Vector& x_prop,
                              const TargetModel& target, const MixtureProposal& q);

/// Nearest published component mean in squared Euclidean distance, ties
/// broken toward the lowest index.
std::size_t assign_component(const Vector& x, const MixtureProposal& q);

/// One full iteration at time t = state.t: propose from the mixture, accept
/// or reject, and (while t < t_stop) assign the new state and, once past the
/// training window (t > t_train), publish the updated component parameters.
/// Mutates x into x_{t+1}. Consumes exactly dim+2 draws.
ChainRecord agm_step(AdaptiveState& state, Vector& x, const TargetModel& target,
                     const SamplerConfig& cfg, RandomStream& rng);

/// Plain independent MH step with a frozen proposal; identical draw
/// discipline (and bit-identical output) to agm_step with t_stop = 0.
ChainRecord baseline_step(Vector& x, const MixtureProposal& q_fixed,
                          const TargetModel& target, RandomStream& rng);

// ---------------------------------------------------------------------------
// Chain drivers

struct ChainResult {
  MixtureProposal initial_proposal;
  MixtureProposal final_proposal;
  Vector x0;
  std::vector<Vector> states;        // x_1 .. x_T
  std::vector<ChainRecord> records;  // one per iteration
};

/// Materialize the initial proposal from the config (drawing means if the
/// policy is box-based), consuming rng in component order.
MixtureProposal build_initial_proposal(const SamplerConfig& cfg, std::size_t dim,
                                       RandomStream& rng);

Vector draw_x0(const SamplerConfig& cfg, std::size_t dim, RandomStream& rng);

/// Run the adaptive chain for cfg.t_tot iterations. Draw order: init means,
/// then x0, then per-iteration draws; everything is determined by cfg.seed.
ChainResult run_agm_chain(const TargetModel& target, const SamplerConfig& cfg);

/// The non-adaptive comparator: same initialization, proposal never changes.
ChainResult run_baseline_chain(const TargetModel& target, const SamplerConfig& cfg);

/// Self-tuning configuration for a target with no prior information: means
/// uniform over the box, wide isotropic covariances, t_train = 100 * dim.
SamplerConfig blackbox_init(std::size_t dim, const Box& box, std::size_t n_components,
                            RandomStream& rng);

}  // namespace agmmh
