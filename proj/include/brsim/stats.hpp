#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "brsim/site_set.hpp"
#include "brsim/variogram.hpp"

namespace brsim {

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
};

using Cdf = std::function<double(double)>;
using QuantileFn = std::function<double(double)>;

/// Two-sided Kolmogorov-Smirnov distance sup_x |F_N(x) - F(x)|.
double ks_statistic(std::span<const double> samples, const Cdf &cdf);

/// Two-sample KS distance between empirical CDFs.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic 1% critical values: 1.63/sqrt(N) and 1.63*sqrt((n+m)/(nm)).
inline constexpr double kKsCoefficient1pct = 1.63;
double ks_critical_1pct(std::size_t n);
double ks_critical_1pct(std::size_t n, std::size_t m);

/// Sorted samples paired with quantile_fn((k - 0.5)/N): (theoretical, empirical).
std::vector<std::pair<double, double>> qq_data(std::span<const double> samples,
                                               const QuantileFn &quantile_fn);

/// Type-7 (linear interpolation) sample quantile, p in [0,1].
double quantile_type7(std::span<const double> sorted, double p);

struct HistogramBin {
  double lower = 0.0;  // inclusive
  double upper = 0.0;  // exclusive, except for the last bin
  std::size_t count = 0;
};

struct CountSummary {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double mean = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  std::vector<HistogramBin> histogram;
};

/// Quartiles (type 7), mean and a fixed-width histogram of integer counts.
/// Bin width is the smallest integer giving at most `max_bins` bins.
CountSummary cluster_count_stats(std::span<const std::uint64_t> counts,
                                 std::size_t max_bins = 20);

struct EstimatorOptions {
  std::size_t reps = 100'000;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Upper bound on grid points, to keep the O(n^3) factorization sane.
  std::size_t max_sites = 4096;
};

/// Coupled estimates of f(A) = E exp(max_{t in A} Z(t)) for several subsets
/// A of one site set: every replication draws Z once on all sites and
/// evaluates each subset on that same draw, so pathwise inequalities between
/// subsets (A in B implies f(A) <= f(B); f(A u B) <= f(A) + f(B)) hold
/// exactly for the estimates. Z has Z(0) = 0 relative to the true origin.
std::vector<EstimateWithError> coupled_sup_exp(
    const VariogramModel &model, const SiteSet &sites,
    const std::vector<std::vector<std::size_t>> &subsets,
    const EstimatorOptions &options);

/// f(A) estimate for the grid A (a single subset of coupled_sup_exp).
EstimateWithError sup_exp_estimate(const VariogramModel &model,
                                   const SiteSet &sites,
                                   const EstimatorOptions &options);

/// Box [lower, lower + side]^d sampled at the given mesh.
SiteSet box_grid(std::span<const double> lower, double side, double mesh);

/// N^{-d} E exp(max of Z over the box grid), the finite-N Pickands quantity.
/// A box of side 0 is the single point `lower`; the estimate is then f itself.
EstimateWithError pickands_estimate(const VariogramModel &model,
                                    std::span<const double> lower, double side,
                                    double mesh,
                                    const EstimatorOptions &options);

/// n^{-1} E max_{i=1..n} exp(Z(i)) on the integers, d = 1.
EstimateWithError extremal_index_estimate(const VariogramModel &model,
                                          std::size_t n,
                                          const EstimatorOptions &options);

} // namespace brsim
