#include "brsim/gaussian_sampler.hpp"

#include <cmath>
#include <sstream>

#include "brsim/errors.hpp"

namespace brsim {

FactorizedGaussian::FactorizedGaussian(SiteSet sites, VariogramModel model)
    : sites_(std::move(sites)), model_(std::move(model)) {
  if (sites_.dim() != model_.dim()) {
    throw UsageError("site dimension " + std::to_string(sites_.dim()) +
                     " does not match model dimension " +
                     std::to_string(model_.dim()));
  }
  const std::size_t reps = sites_.num_representatives();
  row_of_.assign(reps, -1);
  for (std::size_t r = 0; r < reps; ++r) {
    if (!sites_.is_origin(sites_.raw_of_representative(r))) {
      row_of_[r] = static_cast<std::ptrdiff_t>(active_.size());
      active_.push_back(r);
    }
  }
  drift_.resize(static_cast<Eigen::Index>(reps), static_cast<Eigen::Index>(reps));
  for (std::size_t a = 0; a < reps; ++a) {
    drift_(a, a) = 0.0;
    for (std::size_t b = a + 1; b < reps; ++b) {
      const double g =
          gamma_between(model_, sites_.point(sites_.raw_of_representative(a)),
                        sites_.point(sites_.raw_of_representative(b)));
      drift_(a, b) = g;
      drift_(b, a) = g;
    }
  }
  factorize();
}

Eigen::MatrixXd FactorizedGaussian::covariance() const {
  const auto reps = static_cast<Eigen::Index>(sites_.num_representatives());
  Eigen::MatrixXd sigma(reps, reps);
  for (Eigen::Index a = 0; a < reps; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double c = cov_w(model_, sites_.point(sites_.raw_of_representative(a)),
                             sites_.point(sites_.raw_of_representative(b)));
      sigma(a, b) = c;
      sigma(b, a) = c;
    }
  }
  return sigma;
}

Eigen::MatrixXd FactorizedGaussian::reconstructed_covariance() const {
  const auto reps = static_cast<Eigen::Index>(sites_.num_representatives());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(reps, reps);
  const Eigen::MatrixXd llt = factor_ * factor_.transpose();
  for (std::size_t i = 0; i < active_.size(); ++i) {
    for (std::size_t k = 0; k < active_.size(); ++k) {
      out(static_cast<Eigen::Index>(active_[i]),
          static_cast<Eigen::Index>(active_[k])) =
          llt(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

void FactorizedGaussian::factorize() {
  const auto m = static_cast<Eigen::Index>(active_.size());
  if (m == 0) {
    factor_.resize(0, 0);
    return;
  }
  Eigen::MatrixXd sigma(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) {
      const double c =
          cov_w(model_, sites_.point(sites_.raw_of_representative(active_[a])),
                sites_.point(sites_.raw_of_representative(active_[b])));
      sigma(a, b) = c;
      sigma(b, a) = c;
    }
  }
  const double mean_diag = sigma.diagonal().mean();
  const double max_diag = sigma.diagonal().maxCoeff();

  // 0, then 1e-12 * mean_diag escalating x10 up to 1e-6 * mean_diag.
  std::vector<double> schedule{0.0};
  for (double rel = 1e-12; rel <= 1.0000001e-6; rel *= 10.0) {
    schedule.push_back(rel * mean_diag);
  }
  for (double jitter : schedule) {
    Eigen::MatrixXd a = sigma;
    a.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      continue;
    }
    Eigen::MatrixXd l = llt.matrixL();
    if (!l.allFinite()) {
      continue;
    }
    const double residual = (l * l.transpose() - sigma).cwiseAbs().maxCoeff();
    if (residual <= jitter + 1e-8 * max_diag) {
      factor_ = std::move(l);
      jitter_ = jitter;
      return;
    }
  }
  std::ostringstream msg;
  msg << "covariance factorization failed after jitter escalation";
  if (model_.is_custom()) {
    msg << " (custom variogram";
  } else {
    msg << " (alpha=" << model_.alpha();
  }
  msg << ", site diameter=" << sites_.diameter() << ", n=" << sites_.size()
      << ")";
  throw NumericalError(msg.str());
}

void FactorizedGaussian::sample_w(RandomStream &stream,
                                  std::span<double> out) const {
  if (out.size() != sites_.size()) {
    throw UsageError("sample_w output has wrong length");
  }
  const auto m = static_cast<Eigen::Index>(active_.size());
  Eigen::VectorXd z(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    z(i) = stream.normal();
  }
  const Eigen::VectorXd w = factor_.triangularView<Eigen::Lower>() * z;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto row = row_of_[sites_.representative_of(j)];
    out[j] = row < 0 ? 0.0 : w(row);
  }
}

std::vector<double> FactorizedGaussian::sample_w(RandomStream &stream) const {
  std::vector<double> out(sites_.size());
  sample_w(stream, out);
  return out;
}

void FactorizedGaussian::sample_drifted(std::size_t anchor, RandomStream &stream,
                                        std::span<double> out) const {
  if (anchor >= sites_.size()) {
    throw UsageError("anchor index " + std::to_string(anchor) +
                     " out of range for " + std::to_string(sites_.size()) +
                     " sites");
  }
  sample_w(stream, out);
  const auto anchor_rep = static_cast<Eigen::Index>(sites_.representative_of(anchor));
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] -= drift_(static_cast<Eigen::Index>(sites_.representative_of(j)),
                     anchor_rep);
  }
}

std::vector<double> FactorizedGaussian::sample_drifted(std::size_t anchor,
                                                       RandomStream &stream) const {
  std::vector<double> out(sites_.size());
  sample_drifted(anchor, stream, out);
  return out;
}

} // namespace brsim
