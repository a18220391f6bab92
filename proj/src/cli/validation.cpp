#include "brsim/cli/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "brsim/distributions.hpp"
#include "brsim/errors.hpp"
#include "brsim/simulator.hpp"
#include "brsim/stats.hpp"

namespace brsim::cli {

nlohmann::json to_json(const CheckResult &r) {
  return {{"name", r.name},
          {"passed", r.passed},
          {"statistic", r.statistic},
          {"threshold", r.threshold},
          {"detail", r.detail}};
}

namespace {

std::vector<FieldSample> run(const FactorizedGaussian &fg,
                             const SamplingMeasure &measure,
                             const ExperimentSettings &settings,
                             std::uint32_t first_replication = 0) {
  SimulationOptions opt;
  opt.seed = settings.seed;
  opt.workers = settings.workers;
  opt.replication = first_replication;
  return simulate_replications(fg, measure, opt, settings.reps);
}

std::vector<double> column(const std::vector<FieldSample> &samples,
                           std::size_t site) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto &s : samples) out.push_back(s.values[site]);
  return out;
}

std::vector<double> maxima(const std::vector<FieldSample> &samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto &s : samples) {
    out.push_back(*std::max_element(s.values.begin(), s.values.end()));
  }
  return out;
}

double mean_count(const std::vector<FieldSample> &samples) {
  double total = 0.0;
  for (const auto &s : samples) total += static_cast<double>(s.num_clusters);
  return total / static_cast<double>(samples.size());
}

void require_reps(std::size_t reps) {
  if (reps < 1) throw UsageError("reps must be >= 1");
}

} // namespace

CheckResult check_marginal(const FactorizedGaussian &fg, std::size_t site,
                           const ExperimentSettings &settings) {
  require_reps(settings.reps);
  const auto samples = run(fg, SamplingMeasure::uniform(fg.size()), settings);
  const auto x = column(samples, site);
  CheckResult r;
  r.name = "marginal";
  r.statistic = ks_statistic(x, [](double v) { return gumbel_cdf(v); });
  r.threshold = ks_critical_1pct(x.size());
  r.passed = r.statistic <= r.threshold;
  r.detail = {{"n_sites", fg.size()},
              {"site_index", site},
              {"mean_clusters", mean_count(samples)}};
  return r;
}

CheckResult check_bivariate(const VariogramModel &model, double s,
                            const ExperimentSettings &settings,
                            std::vector<std::pair<double, double>> *qq) {
  require_reps(settings.reps);
  if (model.dim() != 1) throw UsageError("bivariate check is one-dimensional");
  const FactorizedGaussian fg(SiteSet::line({0.0, s}), model);
  const auto samples = run(fg, SamplingMeasure::uniform(2), settings);
  const double sp[] = {s};
  const double shift = std::log(bivariate_neglog(model, sp, 0.0, 0.0));
  auto x = maxima(samples);
  for (double &v : x) v -= shift;
  CheckResult r;
  r.name = "bivariate";
  r.statistic = ks_statistic(x, [](double v) { return gumbel_cdf(v); });
  r.threshold = ks_critical_1pct(x.size());
  r.passed = r.statistic <= r.threshold;

  const auto pairs = qq_data(x, gumbel_quantile);
  // Interior 98% of the Q-Q points; the extreme tails are too noisy to judge.
  const std::size_t cut = pairs.size() / 100;
  double dev = 0.0;
  for (std::size_t k = cut; k + cut < pairs.size(); ++k) {
    dev = std::max(dev, std::fabs(pairs[k].first - pairs[k].second));
  }
  r.detail = {{"s", s},
              {"log_extremal_coefficient", shift},
              {"qq_interior_max_deviation", dev},
              {"mean_clusters", mean_count(samples)}};
  if (qq) *qq = pairs;
  return r;
}

CheckResult check_mu_invariance(const FactorizedGaussian &fg,
                                const std::vector<double> &weights,
                                const ExperimentSettings &settings) {
  require_reps(settings.reps);
  const auto uniform = run(fg, SamplingMeasure::uniform(fg.size()), settings);
  const auto skewed = run(fg, SamplingMeasure(weights), settings,
                          static_cast<std::uint32_t>(settings.reps));
  const auto a = maxima(uniform);
  const auto b = maxima(skewed);
  CheckResult r;
  r.name = "mu_invariance";
  r.statistic = ks_two_sample(a, b);
  r.threshold = ks_critical_1pct(a.size(), b.size());
  r.passed = r.statistic <= r.threshold;
  r.detail = {{"weights", weights},
              {"mean_clusters_uniform", mean_count(uniform)},
              {"mean_clusters_skewed", mean_count(skewed)}};
  return r;
}

CheckResult check_stationarity(const VariogramModel &model, const SiteSet &sites,
                               double shift, const ExperimentSettings &settings) {
  require_reps(settings.reps);
  const std::vector<double> offset(static_cast<std::size_t>(sites.dim()), shift);
  const FactorizedGaussian base(sites, model);
  const FactorizedGaussian moved(sites.shifted(offset), model);
  const auto uniform = SamplingMeasure::uniform(sites.size());
  const auto a = run(base, uniform, settings);
  const auto b = run(moved, uniform, settings, static_cast<std::uint32_t>(settings.reps));
  const double d_max = ks_two_sample(maxima(a), maxima(b));
  const double d_first = ks_two_sample(column(a, 0), column(b, 0));
  CheckResult r;
  r.name = "stationarity";
  r.statistic = std::max(d_max, d_first);
  r.threshold = ks_critical_1pct(settings.reps, settings.reps);
  r.passed = r.statistic <= r.threshold;
  r.detail = {{"alpha", model.alpha()},
              {"shift", shift},
              {"ks_maximum", d_max},
              {"ks_first_site", d_first},
              {"jitter_shifted", moved.jitter_used()}};
  return r;
}

CheckResult check_parallel_determinism(const FactorizedGaussian &fg,
                                       std::size_t runs, std::uint64_t seed,
                                       int workers) {
  const auto measure = SamplingMeasure::uniform(fg.size());
  std::size_t mismatches = 0;
  std::size_t reference_mismatches = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    SimulationOptions opt;
    opt.seed = seed;
    opt.replication = static_cast<std::uint32_t>(r);
    opt.workers = 1;
    const auto one = simulate(fg, measure, opt);
    opt.workers = workers;
    const auto many = simulate(fg, measure, opt);
    const auto ref = simulate_reference(fg, measure, opt);
    if (one.values != many.values || one.num_clusters != many.num_clusters ||
        one.v_trace != many.v_trace) {
      ++mismatches;
    }
    if (one.values != ref.values || one.num_clusters != ref.num_clusters) {
      ++reference_mismatches;
    }
  }
  CheckResult r;
  r.name = "parallel_determinism";
  r.statistic = static_cast<double>(mismatches + reference_mismatches);
  r.threshold = 0.0;
  r.passed = mismatches == 0 && reference_mismatches == 0;
  r.detail = {{"runs", runs},
              {"workers", workers},
              {"mismatches", mismatches},
              {"reference_mismatches", reference_mismatches}};
  return r;
}

CheckResult check_fdd_vs_bivariate(const VariogramModel &model, double s,
                                   double y1, double y2, std::size_t reps,
                                   std::uint64_t seed, int workers) {
  const SiteSet sites = SiteSet::line({0.0, s});
  const double y[] = {y1, y2};
  OracleOptions opt;
  opt.reps = reps;
  opt.seed = seed;
  opt.workers = workers;
  const auto est = fdd_cdf_oracle(sites, model, y, opt);
  const double sp[] = {s};
  const double exact = std::exp(-bivariate_neglog(model, sp, y1, y2));
  CheckResult r;
  r.name = "fdd_vs_bivariate";
  r.statistic = std::fabs(est.value - exact) / est.std_error;
  r.threshold = 3.0;
  r.passed = r.statistic <= r.threshold;
  r.detail = {{"estimate", est.value},
              {"std_error", est.std_error},
              {"closed_form", exact},
              {"reps", reps}};
  return r;
}

CheckResult check_degenerate_cluster_law(std::size_t n, std::size_t runs,
                                         std::uint64_t seed, int workers) {
  if (n < 1 || runs < 2) throw UsageError("need n >= 1 and runs >= 2");
  const FactorizedGaussian fg(SiteSet::line(std::vector<double>(n, 0.3)),
                              VariogramModel(1.0));
  ExperimentSettings settings{runs, seed, workers};
  const auto samples = run(fg, SamplingMeasure::uniform(n), settings);

  auto moments = [](const std::vector<double> &c) {
    double m = 0.0, q = 0.0;
    for (double v : c) m += v;
    m /= static_cast<double>(c.size());
    for (double v : c) q += (v - m) * (v - m);
    return std::pair{m, std::sqrt(q / static_cast<double>(c.size() - 1) /
                                  static_cast<double>(c.size()))};
  };
  std::vector<double> sim_counts;
  bool equal_coordinates = true;
  for (const auto &s : samples) {
    sim_counts.push_back(static_cast<double>(s.num_clusters));
    equal_coordinates = equal_coordinates &&
                        std::all_of(s.values.begin(), s.values.end(),
                                    [&](double v) { return v == s.values[0]; });
  }

  // Stopping rule on the V stream alone, from an unrelated generator.
  std::mt19937_64 gen(seed ^ 0x5DEECE66Dull);
  std::exponential_distribution<double> expo(1.0);
  const double log_n = std::log(static_cast<double>(n));
  std::vector<double> oracle_counts(runs);
  for (auto &count : oracle_counts) {
    double g = expo(gen);
    const double v1 = -std::log(g);
    std::size_t m = 1;
    while (true) {
      g += expo(gen);
      ++m;
      if (-std::log(g) + log_n <= v1) break;
    }
    count = static_cast<double>(m);
  }
  const auto [sim_mean, sim_se] = moments(sim_counts);
  const auto [orc_mean, orc_se] = moments(oracle_counts);
  const double se = std::hypot(sim_se, orc_se);

  CheckResult r;
  r.name = "degenerate_cluster_law";
  r.statistic = se > 0.0 ? std::fabs(sim_mean - orc_mean) / se
                         : (sim_mean == orc_mean ? 0.0 : INFINITY);
  r.threshold = 4.0;
  r.passed = r.statistic <= r.threshold && equal_coordinates;
  r.detail = {{"n", n},
              {"runs", runs},
              {"mean_clusters", sim_mean},
              {"oracle_mean", orc_mean},
              {"equal_coordinates", equal_coordinates}};
  return r;
}

CheckResult check_change_of_measure(const VariogramModel &model,
                                    const SiteSet &grid, std::size_t anchor,
                                    std::size_t reps, std::uint64_t seed,
                                    int workers) {
  const auto res = change_of_measure_check(model, grid, anchor, reps, seed, workers);
  CheckResult r;
  r.name = "change_of_measure";
  r.statistic = std::fabs(res.z_score);
  r.threshold = 3.0;
  r.passed = r.statistic <= r.threshold;
  r.detail = {{"lhs", res.lhs},   {"lhs_se", res.lhs_se}, {"rhs", res.rhs},
              {"rhs_se", res.rhs_se}, {"z", res.z_score}, {"reps", reps}};
  return r;
}

CheckResult check_naive_bias(const FactorizedGaussian &fg, std::size_t site,
                             std::uint64_t truncation,
                             const ExperimentSettings &settings) {
  require_reps(settings.reps);
  std::vector<double> naive(settings.reps);
#pragma omp parallel for num_threads(std::max(1, settings.workers)) schedule(static)
  for (std::size_t r = 0; r < settings.reps; ++r) {
    SimulationOptions opt;
    opt.seed = settings.seed;
    opt.replication = static_cast<std::uint32_t>(r);
    naive[r] = simulate_naive(fg, opt, truncation).values[site];
  }
  const auto gumbel = [](double v) { return gumbel_cdf(v); };
  const double d_naive = ks_statistic(naive, gumbel);
  const auto exact = run(fg, SamplingMeasure::uniform(fg.size()), settings);
  const double d_exact = ks_statistic(column(exact, site), gumbel);
  const double crit = ks_critical_1pct(settings.reps);

  CheckResult r;
  r.name = "naive_bias";
  r.statistic = d_naive;
  r.threshold = crit;
  r.passed = d_naive > crit && d_exact <= crit;
  r.detail = {{"truncation", truncation},
              {"ks_naive", d_naive},
              {"ks_exact", d_exact},
              {"site_index", site}};
  return r;
}

} // namespace brsim::cli
