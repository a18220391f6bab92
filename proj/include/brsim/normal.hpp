#pragma once

namespace brsim {

/// Standard normal distribution function, via erfc.
double std_normal_cdf(double x);

/// Inverse of std_normal_cdf on (0,1) (Wichura's AS241, ~1e-16 relative).
/// Returns -inf/+inf at 0/1; NaN outside [0,1].
double std_normal_quantile(double p);

} // namespace brsim
