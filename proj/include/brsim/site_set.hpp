#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace brsim {

/// The n evaluation sites t_1..t_n in R^d, stored row-major.
///
/// Sites with bitwise-equal coordinates share one representative; the
/// Gaussian sampler factorizes over representatives only.
class SiteSet {
public:
  SiteSet(std::vector<double> coords, int dim);

  /// One-dimensional convenience constructor.
  static SiteSet line(std::vector<double> points);

  /// Parses `a:b:mesh[,a:b:mesh...]`, one triple per dimension, inclusive
  /// endpoints. The last dimension varies fastest.
  static SiteSet grid(std::string_view expr);

  std::size_t size() const { return n_; }
  int dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<double> &coords() const { return coords_; }

  std::size_t num_representatives() const { return reps_.size(); }
  /// Raw index -> representative index in [0, num_representatives()).
  std::size_t representative_of(std::size_t i) const { return dedup_[i]; }
  /// Representative index -> raw index of its first occurrence.
  std::size_t raw_of_representative(std::size_t r) const { return reps_[r]; }
  const std::vector<std::size_t> &dedup_map() const { return dedup_; }

  /// Whether site i is exactly the origin.
  bool is_origin(std::size_t i) const;

  /// A copy with every site moved by `offset` (length dim()).
  SiteSet shifted(std::span<const double> offset) const;

  /// Largest pairwise Euclidean distance (0 for a single site).
  double diameter() const;

private:
  void build_dedup();

  std::vector<double> coords_;
  int dim_;
  std::size_t n_;
  std::vector<std::size_t> dedup_;
  std::vector<std::size_t> reps_;
};

} // namespace brsim
