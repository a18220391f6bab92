#include "brsim/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brsim/errors.hpp"
#include "brsim/gaussian_sampler.hpp"
#include "brsim/random_stream.hpp"

namespace brsim {

double gumbel_cdf(double x, double loc) { return std::exp(-std::exp(-(x - loc))); }

double gumbel_quantile(double p) { return -std::log(-std::log(p)); }

double frechet_cdf(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double bivariate_neglog(const VariogramModel &model, ConstPoint s, double y1,
                        double y2) {
  const double g = gamma(model, s);
  if (g == 0.0) {
    return std::exp(-std::min(y1, y2));
  }
  const double lambda = std::sqrt(g / 2.0);
  const double d = (y2 - y1) / (2.0 * lambda);
  return std::exp(-y1) * std_normal_cdf(lambda + d) +
         std::exp(-y2) * std_normal_cdf(lambda - d);
}

namespace {

// Streams for the oracles live far from the simulator's cluster indices.
constexpr std::uint64_t kOracleStream = 0x0A11'0000'0000'0000ull;
constexpr std::uint64_t kLhsStream = 0x0C0F'0000'0000'0000ull;
constexpr std::uint64_t kRhsStream = 0x0C0F'8000'0000'0000ull;

// Two-pass moments, so a constant sample has a standard error of exactly 0.
struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq_dev = 0.0;
  std::size_t count = 0;

  double mean() const { return sum / static_cast<double>(count); }
  double std_error() const {
    if (count < 2) return 0.0;
    const double var = sum_sq_dev / static_cast<double>(count - 1);
    return std::sqrt(var / static_cast<double>(count));
  }
};

// Mean of f(draw) over reps draws, each from its own stream; the result is
// independent of the worker count because per-draw values are reduced in
// index order.
template <typename F>
MeanAccumulator replicate_mean(std::size_t reps, int workers, F &&per_draw) {
  std::vector<double> values(reps);
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(static)
  for (std::size_t r = 0; r < reps; ++r) {
    values[r] = per_draw(r);
  }
  MeanAccumulator acc;
  for (double v : values) acc.sum += v;
  acc.count = reps;
  const double m = acc.mean();
  for (double v : values) acc.sum_sq_dev += (v - m) * (v - m);
  return acc;
}

} // namespace

CdfEstimate fdd_cdf_oracle(const SiteSet &sites, const VariogramModel &model,
                           std::span<const double> y,
                           const OracleOptions &options) {
  if (y.size() != sites.size()) {
    throw UsageError("threshold vector length does not match the site count");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw UsageError("thresholds must be finite");
  }
  if (options.reps < 1) {
    throw UsageError("reps must be >= 1");
  }
  if (options.anchor >= sites.size()) {
    throw UsageError("oracle anchor out of range");
  }
  std::vector<double> offset(sites.point(options.anchor).begin(),
                             sites.point(options.anchor).end());
  for (double &x : offset) x = -x;
  const SiteSet shifted = sites.shifted(offset);
  const FactorizedGaussian fg(shifted, model);
  // Z(u) = W(u) - gamma(u) is the drifted draw anchored at the origin site.
  const std::size_t origin = options.anchor;
  const std::size_t n = sites.size();

  const auto acc = replicate_mean(options.reps, options.workers, [&](std::size_t r) {
    RandomStream stream(options.seed, kOracleStream + r);
    thread_local std::vector<double> z;
    z.resize(n);
    fg.sample_drifted(origin, stream, z);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) top = std::max(top, z[j] - y[j]);
    return std::exp(top);
  });
  const double m = acc.mean();
  const double value = std::exp(-m);
  return CdfEstimate{value, value * acc.std_error(), options.reps};
}

namespace {

double ratio_max_over_sum(std::span<const double> x) {
  const double top = *std::max_element(x.begin(), x.end());
  double s = 0.0;
  for (double v : x) s += std::exp(v - top);
  return 1.0 / s;
}

} // namespace

ChangeOfMeasureResult change_of_measure_check(const VariogramModel &model,
                                              const SiteSet &grid,
                                              std::size_t anchor_index,
                                              std::size_t reps,
                                              std::uint64_t seed, int workers) {
  if (anchor_index >= grid.size()) {
    throw UsageError("change-of-measure anchor is not a grid point");
  }
  if (reps < 1) {
    throw UsageError("reps must be >= 1");
  }
  const std::size_t n = grid.size();

  // Left side: W with W(0) = 0 and variance 2*gamma at the grid points.
  std::vector<double> half_var(n);
  for (std::size_t j = 0; j < n; ++j) half_var[j] = gamma(model, grid.point(j));
  const FactorizedGaussian fg_w(grid, model);
  const auto lhs = replicate_mean(reps, workers, [&](std::size_t r) {
    RandomStream stream(seed, kLhsStream + r);
    thread_local std::vector<double> x;
    x.resize(n);
    fg_w.sample_w(stream, x);
    for (std::size_t j = 0; j < n; ++j) x[j] -= half_var[j];
    return std::exp(x[anchor_index]) * ratio_max_over_sum(x);
  });

  // Right side: Z at the grid shifted by -t; Z is the drifted draw anchored
  // at the site that lands on the origin.
  std::vector<double> offset(grid.point(anchor_index).begin(),
                             grid.point(anchor_index).end());
  for (double &v : offset) v = -v;
  const FactorizedGaussian fg_z(grid.shifted(offset), model);
  const auto rhs = replicate_mean(reps, workers, [&](std::size_t r) {
    RandomStream stream(seed, kRhsStream + r);
    thread_local std::vector<double> z;
    z.resize(n);
    fg_z.sample_drifted(anchor_index, stream, z);
    return ratio_max_over_sum(z);
  });

  ChangeOfMeasureResult out;
  out.lhs = lhs.mean();
  out.lhs_se = lhs.std_error();
  out.rhs = rhs.mean();
  out.rhs_se = rhs.std_error();
  const double se = std::hypot(out.lhs_se, out.rhs_se);
  const double diff = out.lhs - out.rhs;
  out.z_score = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(
                                                              std::numeric_limits<double>::infinity(), diff));
  return out;
}

} // namespace brsim
