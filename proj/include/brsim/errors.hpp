#pragma once

#include <stdexcept>
#include <string>

namespace brsim {

// Bad arguments: wrong dimension, out-of-range index, malformed input.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Covariance factorization or another numerical step could not be completed.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Requested work exceeds a configured budget (grid size, cluster cap).
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace brsim
