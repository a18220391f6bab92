#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "brsim/gaussian_sampler.hpp"
#include "brsim/site_set.hpp"
#include "brsim/variogram.hpp"

namespace brsim::cli {

/// Outcome of one validation experiment. `statistic` and `threshold` carry
/// the numbers the pass decision was made on; `detail` holds the rest.
struct CheckResult {
  std::string name;
  bool passed = false;
  double statistic = 0.0;
  double threshold = 0.0;
  nlohmann::json detail = nlohmann::json::object();
};

nlohmann::json to_json(const CheckResult &r);

struct ExperimentSettings {
  std::size_t reps = 10'000;
  std::uint64_t seed = 1;
  int workers = 1;
};

/// Gumbel marginal at one site: KS distance vs Lambda <= 1.63/sqrt(reps).
CheckResult check_marginal(const FactorizedGaussian &fg, std::size_t site,
                           const ExperimentSettings &settings);

/// eta(0) v eta(s) shifted by log of bivariate_neglog(s, 0, 0) is standard
/// Gumbel. Sites are {0, s} in one dimension. `qq` receives the Q-Q pairs.
CheckResult check_bivariate(const VariogramModel &model, double s,
                            const ExperimentSettings &settings,
                            std::vector<std::pair<double, double>> *qq = nullptr);

/// max_j eta(t_j) under uniform and under `weights` agree (two-sample KS).
CheckResult check_mu_invariance(const FactorizedGaussian &fg,
                                const std::vector<double> &weights,
                                const ExperimentSettings &settings);

/// Runs on S and S + shift agree in the maximum and in the marginal at the
/// first site (two-sample KS, both must pass).
CheckResult check_stationarity(const VariogramModel &model, const SiteSet &sites,
                               double shift, const ExperimentSettings &settings);

/// `runs` replications with K = 1 and K = `workers` are bit-identical, and
/// match the serial reference loop.
CheckResult check_parallel_determinism(const FactorizedGaussian &fg,
                                       std::size_t runs, std::uint64_t seed,
                                       int workers);

/// Monte Carlo finite-dimensional CDF at sites {0, s} vs exp(-bivariate_neglog).
CheckResult check_fdd_vs_bivariate(const VariogramModel &model, double s,
                                   double y1, double y2, std::size_t reps,
                                   std::uint64_t seed, int workers);

/// n identical sites: mean cluster count vs the V-stream stopping rule
/// inf{M : V_M + log n <= V_1}, simulated without any Gaussian draws.
CheckResult check_degenerate_cluster_law(std::size_t n, std::size_t runs,
                                         std::uint64_t seed, int workers);

/// |z| <= 3 for the change-of-measure identity on `grid` anchored at `anchor`.
CheckResult check_change_of_measure(const VariogramModel &model,
                                    const SiteSet &grid, std::size_t anchor,
                                    std::size_t reps, std::uint64_t seed,
                                    int workers);

/// Truncated baseline at `site` must be rejected by KS at 1% while the exact
/// simulator passes there.
CheckResult check_naive_bias(const FactorizedGaussian &fg, std::size_t site,
                             std::uint64_t truncation,
                             const ExperimentSettings &settings);

} // namespace brsim::cli
