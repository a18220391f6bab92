#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "brsim/random_stream.hpp"
#include "brsim/site_set.hpp"
#include "brsim/variogram.hpp"

namespace brsim {

/// Covariance of (W(t_1), ..., W(t_n)) factorized once, plus the drift table
/// gamma(t_j - t_k). Immutable after construction; share it across threads
/// and give each draw its own RandomStream.
///
/// Representatives located exactly at the origin have W = 0 and are pinned
/// rather than factorized. The remaining representatives are factorized by
/// Cholesky, adding diagonal jitter only when the plain factorization fails.
class FactorizedGaussian {
public:
  FactorizedGaussian(SiteSet sites, VariogramModel model);

  const SiteSet &sites() const { return sites_; }
  const VariogramModel &model() const { return model_; }
  std::size_t size() const { return sites_.size(); }

  /// Diagonal jitter added before the successful factorization (0 if none).
  double jitter_used() const { return jitter_; }

  /// Lower-triangular factor over the factorized (non-origin) representatives.
  const Eigen::MatrixXd &factor() const { return factor_; }

  /// Covariance over all representatives, origin rows included.
  Eigen::MatrixXd covariance() const;

  /// L*L^T expanded to all representatives (zero rows at pinned origins).
  Eigen::MatrixXd reconstructed_covariance() const;

  /// gamma(t_j - t_k) for raw site indices.
  double drift(std::size_t j, std::size_t k) const {
    return drift_(sites_.representative_of(j), sites_.representative_of(k));
  }

  /// One draw of W at every raw site. `out` must have size().
  void sample_w(RandomStream &stream, std::span<double> out) const;
  std::vector<double> sample_w(RandomStream &stream) const;

  /// X_j = W_j - gamma(t_j - t_anchor) with W a fresh sample_w draw.
  void sample_drifted(std::size_t anchor, RandomStream &stream,
                      std::span<double> out) const;
  std::vector<double> sample_drifted(std::size_t anchor,
                                     RandomStream &stream) const;

private:
  void factorize();

  SiteSet sites_;
  VariogramModel model_;
  std::vector<std::size_t> active_;     // representative index per factor row
  std::vector<std::ptrdiff_t> row_of_;  // representative -> factor row or -1
  Eigen::MatrixXd factor_;
  Eigen::MatrixXd drift_;
  double jitter_ = 0.0;
};

/// Builds the sampler; throws NumericalError if factorization fails even at
/// the largest jitter.
inline FactorizedGaussian build_sampler(SiteSet sites, VariogramModel model) {
  return FactorizedGaussian(std::move(sites), std::move(model));
}

} // namespace brsim
