#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brsim/normal.hpp"
#include "brsim/site_set.hpp"
#include "brsim/variogram.hpp"

namespace brsim {

/// Monte Carlo probability with its standard error.
struct CdfEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
};

/// Lambda(x - loc) = exp(-exp(-(x - loc))).
double gumbel_cdf(double x, double loc = 0.0);

/// Standard Gumbel quantile, -log(-log p).
double gumbel_quantile(double p);

/// Frechet(1) distribution function exp(-1/x) for x > 0, 0 otherwise.
double frechet_cdf(double x);

/// -log P(eta(0) <= y1, eta(s) <= y2) for the two-site Brown-Resnick law
/// (Husler-Reiss form). With lambda = sqrt(gamma(s)/2):
///   e^{-y1} Phi(lambda + (y2-y1)/(2 lambda)) + e^{-y2} Phi(lambda + (y1-y2)/(2 lambda)).
/// At s = 0 the two coordinates coincide and the result is e^{-min(y1,y2)}.
double bivariate_neglog(const VariogramModel &model, ConstPoint s, double y1,
                        double y2);

struct OracleOptions {
  std::size_t reps = 1'000'000;
  std::uint64_t seed = 1;
  /// Site whose position becomes the origin of the shifted field Z.
  std::size_t anchor = 0;
  int workers = 1;
};

/// P(eta(t_j) <= y_j for all j) = exp(-E exp(max_j (Z(t_j - t_a) - y_j))),
/// estimated by Monte Carlo over Z. The standard error is the delta-method
/// value exp(-m) * SE(m).
CdfEstimate fdd_cdf_oracle(const SiteSet &sites, const VariogramModel &model,
                           std::span<const double> y,
                           const OracleOptions &options = {});

struct ChangeOfMeasureResult {
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;
  double z_score = 0.0;
};

/// Checks E[exp(W(t) - gamma(t)) F(W - gamma)] = E[F(Z(. - t))] on a grid,
/// with F(x) = max_j exp(x_j) / sum_j exp(x_j), which is unchanged by adding
/// a constant to every coordinate. Both sides are estimated from independent
/// draws; the result carries the standardized difference.
ChangeOfMeasureResult change_of_measure_check(const VariogramModel &model,
                                              const SiteSet &grid,
                                              std::size_t anchor_index,
                                              std::size_t reps,
                                              std::uint64_t seed,
                                              int workers = 1);

} // namespace brsim
