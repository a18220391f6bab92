#include "brsim/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brsim/errors.hpp"

namespace brsim {

SamplingMeasure::SamplingMeasure(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw UsageError("sampling measure needs at least one weight");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw UsageError("sampling weights must be positive and finite");
    }
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (double &w : weights_) {
    w /= total;
  }
  log_weights_.resize(weights_.size());
  std::transform(weights_.begin(), weights_.end(), log_weights_.begin(),
                 [](double w) { return std::log(w); });
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  cumulative_.back() = 1.0;
}

SamplingMeasure SamplingMeasure::uniform(std::size_t n) {
  if (n == 0) {
    throw UsageError("uniform measure needs n >= 1");
  }
  SamplingMeasure m(std::vector<double>(n, 1.0));
  // Exact values so that uniform weights reproduce log n bit-for-bit.
  const double w = 1.0 / static_cast<double>(n);
  const double lw = -std::log(static_cast<double>(n));
  std::fill(m.weights_.begin(), m.weights_.end(), w);
  std::fill(m.log_weights_.begin(), m.log_weights_.end(), lw);
  return m;
}

std::size_t SamplingMeasure::sample(RandomStream &stream) const {
  const double u = stream.uniform();
  if (weights_.size() == 1) {
    return 0;
  }
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()),
                  weights_.size() - 1);
}

double VStream::next() {
  gamma_sum_ += stream_.exponential();
  ++count_;
  return -std::log(gamma_sum_);
}

} // namespace brsim
