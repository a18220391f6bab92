#include "brsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "brsim/errors.hpp"
#include "brsim/gaussian_sampler.hpp"
#include "brsim/random_stream.hpp"

namespace brsim {

double ks_statistic(std::span<const double> samples, const Cdf &cdf) {
  if (samples.empty()) {
    throw UsageError("ks_statistic needs at least one sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw UsageError("ks_two_sample needs two nonempty samples");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                              static_cast<double>(j) / ny));
  }
  return d;
}

double ks_critical_1pct(std::size_t n) {
  return kKsCoefficient1pct / std::sqrt(static_cast<double>(n));
}

double ks_critical_1pct(std::size_t n, std::size_t m) {
  const double a = static_cast<double>(n), b = static_cast<double>(m);
  return kKsCoefficient1pct * std::sqrt((a + b) / (a * b));
}

std::vector<std::pair<double, double>> qq_data(std::span<const double> samples,
                                               const QuantileFn &quantile_fn) {
  if (samples.empty()) {
    throw UsageError("qq_data needs at least one sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    out[k] = {quantile_fn((static_cast<double>(k) + 0.5) / n), sorted[k]};
  }
  return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw UsageError("quantile of empty sample");
  }
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

CountSummary cluster_count_stats(std::span<const std::uint64_t> counts,
                                 std::size_t max_bins) {
  if (counts.empty()) {
    throw UsageError("cluster_count_stats needs at least one count");
  }
  if (max_bins < 1) {
    throw UsageError("histogram needs at least one bin");
  }
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  CountSummary s;
  s.q25 = quantile_type7(sorted, 0.25);
  s.median = quantile_type7(sorted, 0.5);
  s.q75 = quantile_type7(sorted, 0.75);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
           static_cast<double>(sorted.size());
  s.min = *std::min_element(counts.begin(), counts.end());
  s.max = *std::max_element(counts.begin(), counts.end());

  const std::uint64_t span = s.max - s.min + 1;
  const std::uint64_t width = (span + max_bins - 1) / max_bins;
  const std::uint64_t bins = (span + width - 1) / width;
  s.histogram.resize(bins);
  for (std::uint64_t b = 0; b < bins; ++b) {
    s.histogram[b].lower = static_cast<double>(s.min + b * width);
    s.histogram[b].upper = static_cast<double>(s.min + (b + 1) * width);
  }
  for (auto c : counts) {
    ++s.histogram[(c - s.min) / width].count;
  }
  return s;
}

namespace {

constexpr std::uint64_t kEstimatorStream = 0x0E57'0000'0000'0000ull;

} // namespace

std::vector<EstimateWithError> coupled_sup_exp(
    const VariogramModel &model, const SiteSet &sites,
    const std::vector<std::vector<std::size_t>> &subsets,
    const EstimatorOptions &options) {
  if (options.reps < 1) {
    throw UsageError("reps must be >= 1");
  }
  if (sites.num_representatives() > options.max_sites) {
    throw ResourceError("grid has " + std::to_string(sites.num_representatives()) +
                        " distinct sites, above the limit of " +
                        std::to_string(options.max_sites));
  }
  for (const auto &subset : subsets) {
    if (subset.empty()) throw UsageError("empty subset");
    for (auto i : subset) {
      if (i >= sites.size()) throw UsageError("subset index out of range");
    }
  }
  const std::size_t n = sites.size();
  const std::size_t k = subsets.size();
  std::vector<double> half_var(n);
  for (std::size_t j = 0; j < n; ++j) half_var[j] = gamma(model, sites.point(j));
  const FactorizedGaussian fg(sites, model);

  // values[r * k + s]: exp(max over subset s) on replication r.
  std::vector<double> values(options.reps * k);
#pragma omp parallel for num_threads(std::max(1, options.workers)) schedule(static)
  for (std::size_t r = 0; r < options.reps; ++r) {
    RandomStream stream(options.seed, kEstimatorStream + r);
    thread_local std::vector<double> z;
    z.resize(n);
    fg.sample_w(stream, z);
    for (std::size_t j = 0; j < n; ++j) z[j] -= half_var[j];
    for (std::size_t s = 0; s < k; ++s) {
      double top = -std::numeric_limits<double>::infinity();
      for (auto i : subsets[s]) top = std::max(top, z[i]);
      values[r * k + s] = std::exp(top);
    }
  }

  std::vector<EstimateWithError> out(k);
  const double reps = static_cast<double>(options.reps);
  for (std::size_t s = 0; s < k; ++s) {
    double sum = 0.0;
    for (std::size_t r = 0; r < options.reps; ++r) sum += values[r * k + s];
    const double mean = sum / reps;
    double sum_sq_dev = 0.0;
    for (std::size_t r = 0; r < options.reps; ++r) {
      const double d = values[r * k + s] - mean;
      sum_sq_dev += d * d;
    }
    const double var = options.reps > 1 ? sum_sq_dev / (reps - 1.0) : 0.0;
    out[s] = EstimateWithError{mean, std::sqrt(var / reps), options.reps};
  }
  return out;
}

EstimateWithError sup_exp_estimate(const VariogramModel &model,
                                   const SiteSet &sites,
                                   const EstimatorOptions &options) {
  std::vector<std::size_t> all(sites.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return coupled_sup_exp(model, sites, {all}, options).front();
}

SiteSet box_grid(std::span<const double> lower, double side, double mesh) {
  if (lower.empty()) {
    throw UsageError("box needs at least one dimension");
  }
  if (!(side >= 0.0) || !(mesh > 0.0)) {
    throw UsageError("box side must be >= 0 and mesh > 0");
  }
  const double steps = side / mesh;
  const double rounded = std::round(steps);
  if (std::fabs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw UsageError("mesh must divide the box side");
  }
  const auto per_axis = static_cast<std::size_t>(rounded) + 1;
  const std::size_t dim = lower.size();
  double total = std::pow(static_cast<double>(per_axis), static_cast<double>(dim));
  if (total > 1e7) {
    throw ResourceError("box grid too large");
  }
  const auto count = static_cast<std::size_t>(total);
  std::vector<double> coords(count * dim);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t a = 0; a < dim; ++a) {
      coords[i * dim + a] = idx[a] + 1 == per_axis && per_axis > 1
                                ? lower[a] + side
                                : lower[a] + static_cast<double>(idx[a]) * mesh;
    }
    for (std::size_t a = dim; a-- > 0;) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
  }
  return SiteSet(std::move(coords), static_cast<int>(dim));
}

EstimateWithError pickands_estimate(const VariogramModel &model,
                                    std::span<const double> lower, double side,
                                    double mesh,
                                    const EstimatorOptions &options) {
  if (lower.size() != static_cast<std::size_t>(model.dim())) {
    throw UsageError("box corner dimension does not match the model");
  }
  const SiteSet grid = box_grid(lower, side, mesh);
  auto est = sup_exp_estimate(model, grid, options);
  if (side > 0.0) {
    const double volume = std::pow(side, static_cast<double>(model.dim()));
    est.value /= volume;
    est.std_error /= volume;
  }
  return est;
}

EstimateWithError extremal_index_estimate(const VariogramModel &model,
                                          std::size_t n,
                                          const EstimatorOptions &options) {
  if (model.dim() != 1) {
    throw UsageError("extremal index estimator is one-dimensional");
  }
  if (n < 1) {
    throw UsageError("n must be >= 1");
  }
  if (n + 1 > options.max_sites) {
    throw ResourceError("n = " + std::to_string(n) + " exceeds the site limit");
  }
  std::vector<double> pts(n);
  std::iota(pts.begin(), pts.end(), 1.0);
  const SiteSet sites = SiteSet::line(std::move(pts));
  auto est = sup_exp_estimate(model, sites, options);
  est.value /= static_cast<double>(n);
  est.std_error /= static_cast<double>(n);
  return est;
}

} // namespace brsim
