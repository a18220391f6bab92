#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>

namespace brsim::cli {

/// At most this many markers are drawn; larger inputs are thinned evenly.
inline constexpr std::size_t kMaxQqMarkers = 2000;

/// Writes a standalone Q-Q plot: axes, the y = x reference line and one
/// circle per (theoretical, empirical) pair. Throws UsageError on empty
/// input (no file is created) and std::runtime_error if `path` is unwritable.
void emit_svg_qq(std::span<const std::pair<double, double>> pairs,
                 const std::string &path, const std::string &title = "Q-Q plot");

} // namespace brsim::cli
