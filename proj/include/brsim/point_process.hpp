#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brsim/random_stream.hpp"

namespace brsim {

/// Discrete probability measure on the sites (the anchor distribution).
class SamplingMeasure {
public:
  /// Normalizes `weights`; every weight must be positive and finite.
  explicit SamplingMeasure(std::vector<double> weights);

  static SamplingMeasure uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double> &weights() const { return weights_; }
  const std::vector<double> &log_weights() const { return log_weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double log_weight(std::size_t i) const { return log_weights_[i]; }

  /// Index i with probability weight(i); consumes one uniform.
  std::size_t sample(RandomStream &stream) const;

private:
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<double> cumulative_;
};

inline std::size_t sample_anchor(const SamplingMeasure &measure,
                                 RandomStream &stream) {
  return measure.sample(stream);
}

/// Points of a Poisson process on R with intensity e^{-v} dv, emitted in
/// strictly decreasing order: V_k = -log(Gamma_k), Gamma_k a sum of k
/// standard exponentials.
class VStream {
public:
  explicit VStream(RandomStream stream) : stream_(stream) {}

  double next();

  double gamma_sum() const { return gamma_sum_; }
  std::uint64_t count() const { return count_; }

private:
  RandomStream stream_;
  double gamma_sum_ = 0.0;
  std::uint64_t count_ = 0;
};

} // namespace brsim
