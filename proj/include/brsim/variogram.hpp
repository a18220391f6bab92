#pragma once

#include <functional>
#include <span>

namespace brsim {

using ConstPoint = std::span<const double>;

enum class VariogramFamily { fractional };

/// Variogram gamma(t) = scale * |t|^alpha / 2 with |.| the Euclidean norm.
///
/// The Gaussian field W used by the simulator has W(0) = 0 and variance
/// 2*gamma, so Cov(W(s), W(t)) = gamma(s) + gamma(t) - gamma(s - t). The field
/// Z has the same covariance and mean -gamma.
///
/// A caller may replace the built-in family with `custom`, a function of the
/// Euclidean norm |t|. Positive semidefiniteness of the resulting kernel is
/// then the caller's responsibility.
class VariogramModel {
public:
  using RadialFunction = std::function<double(double)>;

  VariogramModel(double alpha, double scale = 1.0, int dim = 1);

  static VariogramModel custom(RadialFunction gamma_of_norm, int dim);

  VariogramFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  int dim() const { return dim_; }
  bool is_custom() const { return static_cast<bool>(custom_); }

  /// gamma as a function of the norm r = |t| >= 0.
  double radial(double r) const;

private:
  VariogramModel() = default;

  VariogramFamily family_ = VariogramFamily::fractional;
  double alpha_ = 1.0;
  double scale_ = 1.0;
  int dim_ = 1;
  RadialFunction custom_;
};

double gamma(const VariogramModel &model, ConstPoint t);

/// gamma(s - t) without materializing the difference.
double gamma_between(const VariogramModel &model, ConstPoint s, ConstPoint t);

double cov_w(const VariogramModel &model, ConstPoint s, ConstPoint t);

double mean_z(const VariogramModel &model, ConstPoint t);
double cov_z(const VariogramModel &model, ConstPoint s, ConstPoint t);

} // namespace brsim
