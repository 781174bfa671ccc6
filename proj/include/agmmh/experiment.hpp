#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "agmmh/diagnostics.hpp"
#include "agmmh/sampler.hpp"
#include "agmmh/target.hpp"

namespace agmmh {

struct TargetSpecConfig {
  enum class Kind { quartic_bimodal, gaussian_mixture } kind = Kind::quartic_bimodal;
  MixtureTargetSpec mixture;  // only for gaussian_mixture

  TargetModel build() const;
  std::size_t dim() const;
};

struct ExperimentConfig {
  std::string name;
  TargetSpecConfig target;
  enum class SamplerKind { agm, baseline } sampler = SamplerKind::agm;

  std::size_t n_components = 1;
  double init_sigma2 = 10.0;
  InitMeansPolicy init_means = SharedBox{};
  X0Policy x0 = X0StandardNormal{};
  std::uint64_t t_train = 0;
  std::uint64_t t_stop = 0;  // defaults to t_tot when absent in the file
  std::uint64_t t_tot = 0;
  double epsilon = 1e-6;

  std::size_t runs = 1;
  std::uint64_t master_seed = 0;
  std::size_t z_draws = 0;  // defaults to t_tot when absent in the file

  /// Throws std::invalid_argument with a descriptive message on any problem.
  void validate() const;

  SamplerConfig sampler_config(std::uint64_t run_seed) const;
};

/// Strict parse: unknown keys anywhere in the file are errors, as are
/// missing required keys and type mismatches. Messages carry the key path.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct Aggregates {
  Vector truth_mean;
  double truth_z = 0.0;
  Vector mean_estimate_mean;
  Vector mean_estimate_mse;
  double z_estimate_mean = 0.0;
  double z_estimate_mse = 0.0;
  Vector lag1_corr_mean;
  double accept_rate_mean = 0.0;
};

struct ExperimentResult {
  std::vector<RunSummary> runs;
  Aggregates aggregates;
  std::vector<double> alpha_trace_mean;
};

/// Ground truth for the aggregate error metrics: analytic for mixture
/// targets (mean = sum a_i eta_i, Z = 1), quadrature for the quartic target.
void experiment_truth(const TargetSpecConfig& target, Vector& truth_mean, double& truth_z);

/// Order-insensitive to run permutation up to rounding.
Aggregates compute_aggregates(std::span<const RunSummary> runs, const Vector& truth_mean,
                              double truth_z);

/// Run `cfg.runs` independent chains (run r uses seed derive_seed(master, r)),
/// optionally across several worker threads, and write summary.csv,
/// aggregates.csv, proposal_final.csv, alpha_trace.csv and the plot data
/// files into out_dir. Output bytes depend only on the config.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir,
                                std::size_t workers = 0);

/// Fig-style plot inputs: the averaged alpha trace plus per-run component
/// ellipse descriptors (mean, std-dev axes, orientation, weight) at t = 0
/// and t = t_tot.
void emit_plot_data(std::span<const RunSummary> runs, const std::filesystem::path& out_dir);

struct EllipseDescriptor {
  double axis_major = 0.0;  // std-dev along the major eigen-axis
  double axis_minor = 0.0;
  double angle_rad = 0.0;   // orientation of the major axis; 0 for 1-D
};

EllipseDescriptor covariance_ellipse(const Matrix& cov);

}  // namespace agmmh
