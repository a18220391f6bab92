#include "brsim/variogram.hpp"

#include <cmath>
#include <string>

#include "brsim/errors.hpp"

namespace brsim {

VariogramModel::VariogramModel(double alpha, double scale, int dim)
    : alpha_(alpha), scale_(scale), dim_(dim) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw UsageError("variogram alpha must lie in (0, 2], got " +
                     std::to_string(alpha));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw UsageError("variogram scale must be positive, got " +
                     std::to_string(scale));
  }
  if (dim < 1) {
    throw UsageError("dimension must be >= 1, got " + std::to_string(dim));
  }
}

VariogramModel VariogramModel::custom(RadialFunction gamma_of_norm, int dim) {
  if (!gamma_of_norm) {
    throw UsageError("custom variogram needs a function");
  }
  if (dim < 1) {
    throw UsageError("dimension must be >= 1, got " + std::to_string(dim));
  }
  VariogramModel m;
  m.dim_ = dim;
  m.alpha_ = 0.0;
  m.scale_ = 0.0;
  m.custom_ = std::move(gamma_of_norm);
  return m;
}

double VariogramModel::radial(double r) const {
  if (r == 0.0) {
    return 0.0;
  }
  if (custom_) {
    return custom_(r);
  }
  if (alpha_ == 2.0) {
    return 0.5 * scale_ * r * r;
  }
  if (alpha_ == 1.0) {
    return 0.5 * scale_ * r;
  }
  return 0.5 * scale_ * std::pow(r, alpha_);
}

namespace {

void check_dim(const VariogramModel &model, ConstPoint p) {
  if (p.size() != static_cast<std::size_t>(model.dim())) {
    throw UsageError("point has dimension " + std::to_string(p.size()) +
                     ", model expects " + std::to_string(model.dim()));
  }
}

} // namespace

double gamma(const VariogramModel &model, ConstPoint t) {
  check_dim(model, t);
  if (t.size() == 1) {
    return model.radial(std::fabs(t[0]));
  }
  double sq = 0.0;
  for (double x : t) {
    sq += x * x;
  }
  return model.radial(std::sqrt(sq));
}

double gamma_between(const VariogramModel &model, ConstPoint s, ConstPoint t) {
  check_dim(model, s);
  check_dim(model, t);
  if (s.size() == 1) {
    return model.radial(std::fabs(s[0] - t[0]));
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = s[i] - t[i];
    sq += d * d;
  }
  return model.radial(std::sqrt(sq));
}

double cov_w(const VariogramModel &model, ConstPoint s, ConstPoint t) {
  return gamma(model, s) + gamma(model, t) - gamma_between(model, s, t);
}

double mean_z(const VariogramModel &model, ConstPoint t) {
  return -gamma(model, t);
}

double cov_z(const VariogramModel &model, ConstPoint s, ConstPoint t) {
  return cov_w(model, s, t);
}

} // namespace brsim
