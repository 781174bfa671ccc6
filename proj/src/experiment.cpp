#include "agmmh/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "agmmh/kernels.hpp"
#include "agmmh/quadrature.hpp"

namespace agmmh {

namespace {

using nlohmann::json;

constexpr std::uint64_t kZStreamTag = 0x7a65737431ULL;

// --------------------------------------------------------------------------
// Strict JSON helpers

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok) fail(path, "unknown key '" + item.key() + "'");
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing required key '") + key + "'");
  return *it;
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(path, "expected a nonnegative integer");
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Vector as_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
  Vector out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_double(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = v.size();
  Vector first = as_vector(v[0], path + "[0]");
  Matrix m(rows, first.size());
  for (std::size_t j = 0; j < first.size(); ++j) m(0, j) = first[j];
  for (std::size_t i = 1; i < rows; ++i) {
    Vector row = as_vector(v[i], path + "[" + std::to_string(i) + "]");
    if (row.size() != first.size()) fail(path, "ragged matrix rows");
    for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = row[j];
  }
  return m;
}

Box as_box(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected an array of [lo, hi] pairs");
  Box box;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    Vector pair = as_vector(v[i], p);
    if (pair.size() != 2) fail(p, "expected exactly [lo, hi]");
    box.lo.push_back(pair[0]);
    box.hi.push_back(pair[1]);
  }
  box.validate();
  return box;
}

TargetSpecConfig parse_target(const json& v, const std::string& path) {
  TargetSpecConfig out;
  const std::string kind = as_string(require(v, "kind", path), path + ".kind");
  if (kind == "quartic_bimodal") {
    check_keys(v, {"kind"}, path);
    out.kind = TargetSpecConfig::Kind::quartic_bimodal;
  } else if (kind == "gaussian_mixture") {
    check_keys(v, {"kind", "weights", "means", "covariances"}, path);
    out.kind = TargetSpecConfig::Kind::gaussian_mixture;
    out.mixture.weights = as_vector(require(v, "weights", path), path + ".weights");
    const json& means = require(v, "means", path);
    if (!means.is_array() || means.empty()) fail(path + ".means", "expected an array of vectors");
    for (std::size_t i = 0; i < means.size(); ++i)
      out.mixture.means.push_back(as_vector(means[i], path + ".means[" + std::to_string(i) + "]"));
    const json& covs = require(v, "covariances", path);
    if (!covs.is_array() || covs.empty())
      fail(path + ".covariances", "expected an array of matrices");
    for (std::size_t i = 0; i < covs.size(); ++i)
      out.mixture.covariances.push_back(
          as_matrix(covs[i], path + ".covariances[" + std::to_string(i) + "]"));
    out.mixture.validate();
  } else {
    fail(path + ".kind", "expected 'quartic_bimodal' or 'gaussian_mixture'");
  }
  return out;
}

InitMeansPolicy parse_init_means(const json& v, const std::string& path) {
  const std::string kind = as_string(require(v, "kind", path), path + ".kind");
  if (kind == "explicit") {
    check_keys(v, {"kind", "values"}, path);
    ExplicitMeans em;
    const json& values = require(v, "values", path);
    if (!values.is_array() || values.empty()) fail(path + ".values", "expected an array of vectors");
    for (std::size_t i = 0; i < values.size(); ++i)
      em.values.push_back(as_vector(values[i], path + ".values[" + std::to_string(i) + "]"));
    return em;
  }
  if (kind == "uniform_boxes") {
    check_keys(v, {"kind", "boxes"}, path);
    ComponentBoxes cb;
    const json& boxes = require(v, "boxes", path);
    if (!boxes.is_array() || boxes.empty()) fail(path + ".boxes", "expected an array of boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i)
      cb.boxes.push_back(as_box(boxes[i], path + ".boxes[" + std::to_string(i) + "]"));
    return cb;
  }
  if (kind == "uniform_box") {
    check_keys(v, {"kind", "box"}, path);
    return SharedBox{as_box(require(v, "box", path), path + ".box")};
  }
  fail(path + ".kind", "expected 'explicit', 'uniform_boxes' or 'uniform_box'");
}

X0Policy parse_x0(const json& v, const std::string& path) {
  const std::string kind = as_string(require(v, "kind", path), path + ".kind");
  if (kind == "standard_normal") {
    check_keys(v, {"kind"}, path);
    return X0StandardNormal{};
  }
  if (kind == "explicit") {
    check_keys(v, {"kind", "value"}, path);
    return X0Explicit{as_vector(require(v, "value", path), path + ".value")};
  }
  fail(path + ".kind", "expected 'standard_normal' or 'explicit'");
}

// --------------------------------------------------------------------------
// CSV helpers

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::vector<std::string> summary_header(std::size_t dim) {
  std::vector<std::string> h = {"run_id", "seed"};
  for (std::size_t k = 0; k < dim; ++k) h.push_back("mean_estimate_" + std::to_string(k));
  h.push_back("z_estimate");
  for (std::size_t k = 0; k < dim; ++k) h.push_back("lag1_corr_" + std::to_string(k));
  h.push_back("accept_rate");
  return h;
}

void write_summary_csv(const std::filesystem::path& path, const ExperimentConfig& cfg,
                       const ExperimentResult& result) {
  const std::size_t dim = cfg.target.dim();
  CsvFile csv(path);
  csv.row(summary_header(dim));
  for (const RunSummary& s : result.runs) {
    std::vector<std::string> row = {std::to_string(s.run_id), std::to_string(s.seed)};
    for (double v : s.mean_estimate) row.push_back(fmt(v));
    row.push_back(fmt(s.z_estimate));
    for (double v : s.lag1_corr) row.push_back(fmt(v));
    row.push_back(fmt(s.accept_rate_overall));
    csv.row(row);
  }
  const Aggregates& a = result.aggregates;
  std::vector<std::string> agg = {"aggregate", std::to_string(cfg.master_seed)};
  for (double v : a.mean_estimate_mean) agg.push_back(fmt(v));
  agg.push_back(fmt(a.z_estimate_mean));
  for (double v : a.lag1_corr_mean) agg.push_back(fmt(v));
  agg.push_back(fmt(a.accept_rate_mean));
  csv.row(agg);
}

void write_aggregates_csv(const std::filesystem::path& path, const ExperimentConfig& cfg,
                          const Aggregates& a) {
  CsvFile csv(path);
  csv.row({"key", "value"});
  csv.row({"runs", std::to_string(cfg.runs)});
  csv.row({"master_seed", std::to_string(cfg.master_seed)});
  const std::size_t dim = a.truth_mean.size();
  for (std::size_t k = 0; k < dim; ++k)
    csv.row({"truth_mean_" + std::to_string(k), fmt(a.truth_mean[k])});
  csv.row({"truth_z", fmt(a.truth_z)});
  for (std::size_t k = 0; k < dim; ++k)
    csv.row({"mean_estimate_mean_" + std::to_string(k), fmt(a.mean_estimate_mean[k])});
  for (std::size_t k = 0; k < dim; ++k)
    csv.row({"mean_estimate_mse_" + std::to_string(k), fmt(a.mean_estimate_mse[k])});
  csv.row({"z_estimate_mean", fmt(a.z_estimate_mean)});
  csv.row({"z_estimate_mse", fmt(a.z_estimate_mse)});
  for (std::size_t k = 0; k < dim; ++k)
    csv.row({"lag1_corr_mean_" + std::to_string(k), fmt(a.lag1_corr_mean[k])});
  csv.row({"accept_rate_mean", fmt(a.accept_rate_mean)});
}

void write_proposal_csv(const std::filesystem::path& path,
                        std::span<const RunSummary> runs, bool final_snapshot) {
  CsvFile csv(path);
  if (runs.empty()) return;
  const std::size_t dim =
      (final_snapshot ? runs.front().final_proposal : runs.front().initial_proposal).dim();
  std::vector<std::string> header = {"run_id", "component", "weight", "count"};
  for (std::size_t k = 0; k < dim; ++k) header.push_back("mean_" + std::to_string(k));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      header.push_back("cov_" + std::to_string(i) + std::to_string(j));
  csv.row(header);

  for (const RunSummary& s : runs) {
    const MixtureProposal& q = final_snapshot ? s.final_proposal : s.initial_proposal;
    for (std::size_t c = 0; c < q.size(); ++c) {
      const GaussianComponent& g = q.components[c];
      std::vector<std::string> row = {std::to_string(s.run_id), std::to_string(c),
                                      fmt(q.weights[c]), std::to_string(g.count)};
      for (double v : g.mean) row.push_back(fmt(v));
      for (double v : g.cov.entries().data()) row.push_back(fmt(v));
      csv.row(row);
    }
  }
}

void write_alpha_trace_csv(const std::filesystem::path& path,
                           const std::vector<double>& trace) {
  CsvFile csv(path);
  csv.row({"iteration", "alpha_mean"});
  for (std::size_t t = 0; t < trace.size(); ++t)
    csv.row({std::to_string(t + 1), fmt(trace[t])});
}

void write_ellipses_csv(const std::filesystem::path& path,
                        std::span<const RunSummary> runs, bool final_snapshot) {
  CsvFile csv(path);
  csv.row({"run_id", "component", "weight", "mean_0", "mean_1", "axis_major", "axis_minor",
           "angle_rad"});
  for (const RunSummary& s : runs) {
    const MixtureProposal& q = final_snapshot ? s.final_proposal : s.initial_proposal;
    for (std::size_t c = 0; c < q.size(); ++c) {
      const GaussianComponent& g = q.components[c];
      const EllipseDescriptor e = covariance_ellipse(g.cov.entries());
      const double mean1 = g.mean.size() > 1 ? g.mean[1] : 0.0;
      csv.row({std::to_string(s.run_id), std::to_string(c), fmt(q.weights[c]), fmt(g.mean[0]),
               fmt(mean1), fmt(e.axis_major), fmt(e.axis_minor), fmt(e.angle_rad)});
    }
  }
}

RunSummary run_one(const ExperimentConfig& cfg, const TargetModel& target, std::uint64_t r) {
  const std::uint64_t seed = derive_seed(cfg.master_seed, r);
  const SamplerConfig scfg = cfg.sampler_config(seed);

  const ChainResult chain = (cfg.sampler == ExperimentConfig::SamplerKind::agm)
                                ? run_agm_chain(target, scfg)
                                : run_baseline_chain(target, scfg);

  RunSummary s;
  s.run_id = r;
  s.seed = seed;
  s.mean_estimate = chain_mean(chain.states);
  s.lag1_corr = lag1_correlation(chain.states);

  std::uint64_t accepted = 0;
  s.alpha_trace.reserve(chain.records.size());
  for (const ChainRecord& rec : chain.records) {
    s.alpha_trace.push_back(rec.alpha);
    accepted += rec.accepted ? 1 : 0;
  }
  s.accept_rate_overall = static_cast<double>(accepted) / static_cast<double>(chain.records.size());

  RandomStream z_rng(derive_seed(seed, kZStreamTag));
  const ZEstimate z =
      estimate_normalizing_constant(target, chain.final_proposal, cfg.z_draws, z_rng);
  s.z_estimate = z.z;
  s.z_ess = z.ess;
  s.z_flagged = z.flagged;

  s.initial_proposal = chain.initial_proposal;
  s.final_proposal = chain.final_proposal;
  return s;
}

}  // namespace

// --------------------------------------------------------------------------

TargetModel TargetSpecConfig::build() const {
  if (kind == Kind::quartic_bimodal) return quartic_bimodal();
  return gaussian_mixture_target(mixture);
}

std::size_t TargetSpecConfig::dim() const {
  return kind == Kind::quartic_bimodal ? 1 : mixture.dim();
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw std::invalid_argument("config: name must not be empty");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (z_draws < 1) throw std::invalid_argument("config: z_draws must be >= 1");
  if (target.kind == TargetSpecConfig::Kind::gaussian_mixture) target.mixture.validate();

  const std::size_t dim = target.dim();
  const SamplerConfig probe = sampler_config(0);
  if (sampler == SamplerKind::agm) {
    try {
      probe.validate(dim);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("config: ") + e.what());
    }
  } else {
    if (t_tot < 1) throw std::invalid_argument("config: schedule.t_tot must be >= 1");
    RandomStream probe_rng(0);
    build_initial_proposal(probe, dim, probe_rng);  // checks means/boxes/dims
  }
}

SamplerConfig ExperimentConfig::sampler_config(std::uint64_t run_seed) const {
  SamplerConfig scfg;
  scfg.n_components = n_components;
  scfg.t_train = t_train;
  scfg.t_stop = t_stop;
  scfg.t_tot = t_tot;
  scfg.epsilon = epsilon;
  scfg.init_means = init_means;
  scfg.init_sigma2 = init_sigma2;
  scfg.x0 = x0;
  scfg.seed = run_seed;
  return scfg;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }

  check_keys(root,
             {"name", "target", "sampler", "proposal", "schedule", "epsilon", "x0", "runs",
              "master_seed", "z_draws"},
             "<root>");

  ExperimentConfig cfg;
  cfg.name = as_string(require(root, "name", "<root>"), "name");
  if (cfg.name.empty()) fail("name", "must not be empty");

  cfg.target = parse_target(require(root, "target", "<root>"), "target");

  const std::string sampler = as_string(require(root, "sampler", "<root>"), "sampler");
  if (sampler == "agm") cfg.sampler = ExperimentConfig::SamplerKind::agm;
  else if (sampler == "baseline") cfg.sampler = ExperimentConfig::SamplerKind::baseline;
  else fail("sampler", "expected 'agm' or 'baseline'");

  const json& proposal = require(root, "proposal", "<root>");
  check_keys(proposal, {"components", "init_sigma2", "init_means"}, "proposal");
  cfg.n_components = as_uint(require(proposal, "components", "proposal"), "proposal.components");
  if (cfg.n_components < 1) fail("proposal.components", "must be >= 1");
  if (proposal.contains("init_sigma2"))
    cfg.init_sigma2 = as_double(proposal["init_sigma2"], "proposal.init_sigma2");
  if (!(cfg.init_sigma2 > 0.0)) fail("proposal.init_sigma2", "must be positive");
  cfg.init_means =
      parse_init_means(require(proposal, "init_means", "proposal"), "proposal.init_means");

  const json& schedule = require(root, "schedule", "<root>");
  check_keys(schedule, {"t_train", "t_stop", "t_tot"}, "schedule");
  cfg.t_train = as_uint(require(schedule, "t_train", "schedule"), "schedule.t_train");
  cfg.t_tot = as_uint(require(schedule, "t_tot", "schedule"), "schedule.t_tot");
  cfg.t_stop = schedule.contains("t_stop")
                   ? as_uint(schedule["t_stop"], "schedule.t_stop")
                   : cfg.t_tot;

  if (root.contains("epsilon")) cfg.epsilon = as_double(root["epsilon"], "epsilon");
  if (!(cfg.epsilon > 0.0)) fail("epsilon", "must be positive");

  cfg.x0 = root.contains("x0") ? parse_x0(root["x0"], "x0") : X0Policy{X0StandardNormal{}};

  cfg.runs = as_uint(require(root, "runs", "<root>"), "runs");
  if (cfg.runs < 1) fail("runs", "must be >= 1");
  cfg.master_seed = as_uint(require(root, "master_seed", "<root>"), "master_seed");
  cfg.z_draws = root.contains("z_draws") ? as_uint(root["z_draws"], "z_draws") : cfg.t_tot;
  if (cfg.z_draws < 1) fail("z_draws", "must be >= 1");

  // Cross-field structural validation, before any chain could start.
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_experiment_config(text);
}

void experiment_truth(const TargetSpecConfig& target, Vector& truth_mean, double& truth_z) {
  if (target.kind == TargetSpecConfig::Kind::gaussian_mixture) {
    truth_mean = target.mixture.mean();
    truth_z = 1.0;
    return;
  }
  const TargetModel model = quartic_bimodal();
  const QuadratureResult q = quadrature_moments(model, Box{{-6.0}, {6.0}}, 4096);
  truth_mean = q.mean;
  truth_z = q.z;
}

Aggregates compute_aggregates(std::span<const RunSummary> runs, const Vector& truth_mean,
                              double truth_z) {
  if (runs.empty()) throw std::invalid_argument("compute_aggregates: no runs");
  const std::size_t dim = runs.front().mean_estimate.size();
  const std::size_t r = runs.size();

  Aggregates a;
  a.truth_mean = truth_mean;
  a.truth_z = truth_z;
  a.mean_estimate_mean.assign(dim, 0.0);
  a.mean_estimate_mse.assign(dim, 0.0);
  a.lag1_corr_mean.assign(dim, 0.0);

  Vector column(r);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < r; ++i) column[i] = runs[i].mean_estimate[k];
    a.mean_estimate_mean[k] = kernels::sum(column) / static_cast<double>(r);
    a.mean_estimate_mse[k] = mse_over_runs(column, truth_mean[k]);
  }
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < r; ++i) column[i] = runs[i].lag1_corr[k];
    a.lag1_corr_mean[k] = kernels::sum(column) / static_cast<double>(r);
  }
  for (std::size_t i = 0; i < r; ++i) column[i] = runs[i].z_estimate;
  a.z_estimate_mean = kernels::sum(column) / static_cast<double>(r);
  a.z_estimate_mse = mse_over_runs(column, truth_z);
  for (std::size_t i = 0; i < r; ++i) column[i] = runs[i].accept_rate_overall;
  a.accept_rate_mean = kernels::sum(column) / static_cast<double>(r);
  return a;
}

EllipseDescriptor covariance_ellipse(const Matrix& cov) {
  EllipseDescriptor e;
  if (cov.rows() == 1) {
    e.axis_major = std::sqrt(cov(0, 0));
    return e;
  }
  if (cov.rows() != 2) throw std::invalid_argument("covariance_ellipse: only 1-D and 2-D supported");
  const double a = cov(0, 0), b = 0.5 * (cov(0, 1) + cov(1, 0)), c = cov(1, 1);
  const double half_tr = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  const double lam_max = half_tr + disc;
  const double lam_min = std::max(half_tr - disc, 0.0);
  e.axis_major = std::sqrt(lam_max);
  e.axis_minor = std::sqrt(lam_min);
  e.angle_rad = 0.5 * std::atan2(2.0 * b, a - c);
  return e;
}

void emit_plot_data(std::span<const RunSummary> runs, const std::filesystem::path& out_dir) {
  if (runs.empty()) throw std::invalid_argument("emit_plot_data: no runs");
  std::vector<std::vector<double>> traces;
  traces.reserve(runs.size());
  for (const RunSummary& s : runs) traces.push_back(s.alpha_trace);
  write_alpha_trace_csv(out_dir / "plot_alpha.csv", alpha_trace_average(traces));
  write_ellipses_csv(out_dir / "plot_ellipses_init.csv", runs, false);
  write_ellipses_csv(out_dir / "plot_ellipses_final.csv", runs, true);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir, std::size_t workers) {
  cfg.validate();
  const TargetModel target = cfg.target.build();

  ExperimentResult result;
  result.runs.resize(cfg.runs);

  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw ? hw : 1;
  }
  workers = std::min<std::size_t>(workers, cfg.runs);

  if (workers <= 1) {
    for (std::uint64_t r = 0; r < cfg.runs; ++r)
      result.runs[r] = run_one(cfg, target, r);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t r = next.fetch_add(1);
          if (r >= cfg.runs) return;
          try {
            result.runs[r] = run_one(cfg, target, r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  Vector truth_mean;
  double truth_z = 0.0;
  experiment_truth(cfg.target, truth_mean, truth_z);
  result.aggregates = compute_aggregates(result.runs, truth_mean, truth_z);

  std::vector<std::vector<double>> traces;
  traces.reserve(result.runs.size());
  for (const RunSummary& s : result.runs) traces.push_back(s.alpha_trace);
  result.alpha_trace_mean = alpha_trace_average(traces);

  std::filesystem::create_directories(out_dir);
  write_summary_csv(out_dir / "summary.csv", cfg, result);
  write_aggregates_csv(out_dir / "aggregates.csv", cfg, result.aggregates);
  write_proposal_csv(out_dir / "proposal_final.csv", result.runs, true);
  write_alpha_trace_csv(out_dir / "alpha_trace.csv", result.alpha_trace_mean);
  emit_plot_data(result.runs, out_dir);
  return result;
}

}  // namespace agmmh
