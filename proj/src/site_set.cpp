#include "brsim/site_set.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "brsim/errors.hpp"

namespace brsim {

SiteSet::SiteSet(std::vector<double> coords, int dim)
    : coords_(std::move(coords)), dim_(dim), n_(0) {
  if (dim < 1) {
    throw UsageError("site dimension must be >= 1");
  }
  if (coords_.empty() || coords_.size() % static_cast<std::size_t>(dim) != 0) {
    throw UsageError("site coordinates must be a nonempty multiple of dim");
  }
  for (double x : coords_) {
    if (!std::isfinite(x)) {
      throw UsageError("site coordinates must be finite");
    }
  }
  n_ = coords_.size() / static_cast<std::size_t>(dim);
  build_dedup();
}

SiteSet SiteSet::line(std::vector<double> points) {
  return SiteSet(std::move(points), 1);
}

void SiteSet::build_dedup() {
  std::map<std::vector<double>, std::size_t> seen;
  dedup_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    auto p = point(i);
    std::vector<double> key(p.begin(), p.end());
    for (double &x : key) {
      x += 0.0; // -0.0 and 0.0 are the same site
    }
    auto [it, inserted] = seen.emplace(std::move(key), reps_.size());
    if (inserted) {
      reps_.push_back(i);
    }
    dedup_[i] = it->second;
  }
}

bool SiteSet::is_origin(std::size_t i) const {
  auto p = point(i);
  return std::all_of(p.begin(), p.end(), [](double x) { return x == 0.0; });
}

SiteSet SiteSet::shifted(std::span<const double> offset) const {
  if (offset.size() != static_cast<std::size_t>(dim_)) {
    throw UsageError("shift offset has wrong dimension");
  }
  std::vector<double> c = coords_;
  for (std::size_t i = 0; i < n_; ++i) {
    for (int k = 0; k < dim_; ++k) {
      c[i * dim_ + k] += offset[k];
    }
  }
  return SiteSet(std::move(c), dim_);
}

double SiteSet::diameter() const {
  double best = 0.0;
  for (std::size_t a = 0; a < reps_.size(); ++a) {
    for (std::size_t b = a + 1; b < reps_.size(); ++b) {
      auto p = point(reps_[a]);
      auto q = point(reps_[b]);
      double sq = 0.0;
      for (int k = 0; k < dim_; ++k) {
        sq += (p[k] - q[k]) * (p[k] - q[k]);
      }
      best = std::max(best, std::sqrt(sq));
    }
  }
  return best;
}

namespace {

double parse_number(std::string_view s, std::string_view expr) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("bad number '" + std::string(s) + "' in grid '" +
                     std::string(expr) + "'");
  }
  return v;
}

std::vector<double> parse_axis(std::string_view axis, std::string_view expr) {
  const auto c1 = axis.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : axis.find(':', c1 + 1);
  if (c2 == std::string_view::npos ||
      axis.find(':', c2 + 1) != std::string_view::npos) {
    throw UsageError("grid axis must be a:b:mesh, got '" + std::string(axis) +
                     "'");
  }
  const double a = parse_number(axis.substr(0, c1), expr);
  const double b = parse_number(axis.substr(c1 + 1, c2 - c1 - 1), expr);
  const double mesh = parse_number(axis.substr(c2 + 1), expr);
  if (b < a) {
    throw UsageError("grid axis needs a <= b in '" + std::string(axis) + "'");
  }
  if (!(mesh > 0.0)) {
    throw UsageError("grid mesh must be positive in '" + std::string(axis) +
                     "'");
  }
  const double steps = (b - a) / mesh;
  const double rounded = std::round(steps);
  if (std::fabs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw UsageError("grid mesh does not divide the interval in '" +
                     std::string(axis) + "'");
  }
  if (rounded > 1e7) {
    throw ResourceError("grid axis too long: '" + std::string(axis) + "'");
  }
  const auto count = static_cast<std::size_t>(rounded) + 1;
  std::vector<double> pts(count);
  for (std::size_t k = 0; k < count; ++k) {
    pts[k] = a + static_cast<double>(k) * mesh;
  }
  pts.back() = b;
  return pts;
}

} // namespace

SiteSet SiteSet::grid(std::string_view expr) {
  std::vector<std::vector<double>> axes;
  std::size_t start = 0;
  while (true) {
    const auto comma = expr.find(',', start);
    axes.push_back(parse_axis(expr.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start),
                              expr));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  const int dim = static_cast<int>(axes.size());
  std::size_t total = 1;
  for (const auto &ax : axes) {
    total *= ax.size();
    if (total > 10'000'000) {
      throw ResourceError("grid '" + std::string(expr) + "' is too large");
    }
  }
  std::vector<double> coords(total * axes.size());
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (int k = 0; k < dim; ++k) {
      coords[i * dim + k] = axes[k][idx[k]];
    }
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx[k] < axes[k].size()) {
        break;
      }
      idx[k] = 0;
    }
  }
  return SiteSet(std::move(coords), dim);
}

} // namespace brsim
