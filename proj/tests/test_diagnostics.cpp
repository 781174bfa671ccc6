#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "agmmh/diagnostics.hpp"
#include "agmmh/rng.hpp"
#include "agmmh/sampler.hpp"
#include "oracles.hpp"

using namespace agmmh;

namespace {

std::vector<Vector> wrap(const std::vector<double>& xs) {
  std::vector<Vector> chain;
  chain.reserve(xs.size());
  for (double x : xs) chain.push_back({x});
  return chain;
}

TargetModel gaussian_target_1d(double mean, double var, double log_scale = 0.0) {
  TargetModel t;
  t.dim = 1;
  t.log_density = [=](const Vector& x) {
    return log_scale + static_cast<double>(
        std::log(oracle::gaussian_pdf_1d(x[0], mean, var)));
  };
  return t;
}

MixtureProposal single_proposal(double mean, double var) {
  Matrix c(1, 1);
  c(0, 0) = var;
  return {{1.0}, {GaussianComponent{{mean}, Covariance(c), 1}}};
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("lag-1 correlation reference cases") {
  // perfectly anticorrelated alternating chain
  std::vector<double> alternating;
  for (int i = 0; i < 1000; ++i) alternating.push_back(i % 2 ? 1.0 : -1.0);
  CHECK(lag1_correlation(wrap(alternating))[0] == doctest::Approx(-1.0).epsilon(1e-12));

  // i.i.d. samples are uncorrelated
  RandomStream rng(14);
  std::vector<double> iid(100000);
  for (auto& x : iid) x = rng.normal();
  CHECK(std::fabs(lag1_correlation(wrap(iid))[0]) < 0.02);

  // duplicated pairs, checked against a direct Pearson computation
  std::vector<double> pairs;
  for (int i = 1; i <= 500; ++i) {
    pairs.push_back(i);
    pairs.push_back(i);
  }
  std::vector<double> a(pairs.begin(), pairs.end() - 1);
  std::vector<double> b(pairs.begin() + 1, pairs.end());
  CHECK(lag1_correlation(wrap(pairs))[0] ==
        doctest::Approx(static_cast<double>(oracle::pearson(a, b))).epsilon(1e-12));
}

TEST_CASE("lag-1 correlation degenerate and error cases") {
  std::vector<double> constant(100, 3.25);
  const auto corr = lag1_correlation(wrap(constant));
  CHECK(std::isnan(corr[0]));  // flagged, never silently zero

  CHECK_THROWS_AS((void)lag1_correlation(wrap({1.0, 2.0})), std::invalid_argument);
}

TEST_CASE("lag-1 correlation is affine invariant") {
  RandomStream rng(15);
  std::vector<double> xs(5000);
  double prev = 0.0;
  for (auto& x : xs) {
    prev = 0.6 * prev + rng.normal();
    x = prev;
  }
  const double base = lag1_correlation(wrap(xs))[0];
  std::vector<double> scaled(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) scaled[i] = -3.7 * xs[i] + 11.0;
  // |a| scaling and shift cancel; the sign of a flips nothing for lag pairs
  CHECK(lag1_correlation(wrap(scaled))[0] == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("mse over runs") {
  std::vector<double> exact(10, 2.5);
  CHECK(mse_over_runs(exact, 2.5) == 0.0);

  std::vector<double> pm = {2.6, 2.4};
  CHECK(mse_over_runs(pm, 2.5) == doctest::Approx(0.01).epsilon(1e-12));

  // synthetic estimator with known variance
  RandomStream rng(16);
  const double sigma = 0.7;
  std::vector<double> estimates(2000);
  for (auto& e : estimates) e = 1.0 + sigma * rng.normal();
  CHECK(mse_over_runs(estimates, 1.0) == doctest::Approx(sigma * sigma).epsilon(0.05));

  CHECK_THROWS_AS((void)mse_over_runs(std::vector<double>{}, 0.0), std::invalid_argument);
}

TEST_CASE("normalizing-constant estimate is exact when target equals proposal") {
  const MixtureProposal q = single_proposal(0.0, 1.0);
  TargetModel t;
  t.dim = 1;
  t.log_density = [q](const Vector& x) { return mixture_log_density(x, q); };
  RandomStream rng(17);
  const ZEstimate z = estimate_normalizing_constant(t, q, 500, rng);
  CHECK(z.z == 1.0);
  CHECK_FALSE(z.flagged);
}

TEST_CASE("normalizing-constant estimate recovers a known scale") {
  // target 2*N(0,1) against proposal N(0,1): Z = 2
  const TargetModel t = gaussian_target_1d(0.0, 1.0, std::log(2.0));
  const MixtureProposal q = single_proposal(0.0, 1.0);
  RandomStream rng(18);
  const ZEstimate z = estimate_normalizing_constant(t, q, 10000, rng);
  CHECK(z.z == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("normalizing-constant estimate is unbiased over repetitions") {
  const TargetModel t = gaussian_target_1d(0.0, 1.0, std::log(2.0));
  const MixtureProposal q = single_proposal(0.0, 1.5);  // deliberate mismatch
  const std::size_t reps = 100, n = 2000;
  std::vector<double> zs(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    RandomStream rng(derive_seed(900, r));
    zs[r] = estimate_normalizing_constant(t, q, n, rng).z;
  }
  double mean = 0.0;
  for (double z : zs) mean += z;
  mean /= reps;
  double var = 0.0;
  for (double z : zs) var += (z - mean) * (z - mean);
  var /= (reps - 1);
  const double se = std::sqrt(var / reps);
  CHECK(std::fabs(mean - 2.0) <= 2.0 * se);
}

TEST_CASE("degenerate importance weights are flagged") {
  // target far in the proposal tail: one draw dominates
  TargetModel t;
  t.dim = 1;
  t.log_density = [](const Vector& x) {
    return -(x[0] - 6.0) * (x[0] - 6.0) / (2.0 * 1e-4);
  };
  const MixtureProposal q = single_proposal(0.0, 1.0);
  RandomStream rng(19);
  const ZEstimate z = estimate_normalizing_constant(t, q, 5000, rng);
  CHECK(z.flagged);
  CHECK(z.ess < 50.0);
}

TEST_CASE("alpha trace averaging") {
  std::vector<std::vector<double>> one = {{0.25, 0.5, 1.0}};
  CHECK(alpha_trace_average(one) == one[0]);

  std::vector<std::vector<double>> all_one(7, std::vector<double>(50, 1.0));
  for (double v : alpha_trace_average(all_one)) CHECK(v == 1.0);

  std::vector<std::vector<double>> ragged = {{1.0, 1.0}, {1.0}};
  CHECK_THROWS_AS((void)alpha_trace_average(ragged), std::invalid_argument);
}

TEST_CASE("alpha trace grows after the training window") {
  // three-mode target, adapted proposal: late alpha beats the train window
  MixtureTargetSpec spec;
  for (double e : {-10.0, 0.0, 10.0}) {
    spec.weights.push_back(1.0 / 3.0);
    spec.means.push_back({e});
    Matrix c(1, 1);
    c(0, 0) = 4.0;
    spec.covariances.push_back(c);
  }
  const TargetModel target = gaussian_mixture_target(spec);

  SamplerConfig cfg;
  cfg.n_components = 3;
  cfg.t_train = 200;
  cfg.t_tot = 2500;
  cfg.t_stop = cfg.t_tot;
  cfg.init_sigma2 = 10.0;
  cfg.init_means = ExplicitMeans{{{-8.101709}, {5.004544}, {10.086797}}};

  const std::size_t runs = 100;
  std::vector<std::vector<double>> traces;
  traces.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    SamplerConfig c = cfg;
    c.seed = derive_seed(41, r);
    const ChainResult res = run_agm_chain(target, c);
    std::vector<double> alpha;
    alpha.reserve(res.records.size());
    for (const auto& rec : res.records) alpha.push_back(rec.alpha);
    traces.push_back(std::move(alpha));
  }
  const auto avg = alpha_trace_average(traces);
  double train_window = 0.0, late_window = 0.0;
  for (std::size_t t = 0; t < 200; ++t) train_window += avg[t];
  for (std::size_t t = 999; t < 2000; ++t) late_window += avg[t];
  train_window /= 200.0;
  late_window /= 1001.0;
  CHECK(late_window > train_window);
}

TEST_CASE("chain mean uses every sample") {
  std::vector<Vector> chain = {{1.0}, {2.0}, {3.0}, {6.0}};
  CHECK(chain_mean(chain)[0] == doctest::Approx(3.0).epsilon(1e-15));
}

}  // TEST_SUITE
