#include "brsim/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "brsim/errors.hpp"

namespace brsim::cli {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 50.0;

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

void emit_svg_qq(std::span<const std::pair<double, double>> pairs,
                 const std::string &path, const std::string &title) {
  if (pairs.empty()) {
    throw UsageError("emit_svg_qq: no points to plot");
  }
  std::vector<std::size_t> keep;
  if (pairs.size() <= kMaxQqMarkers) {
    keep.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) keep[i] = i;
  } else {
    keep.resize(kMaxQqMarkers);
    const double step = static_cast<double>(pairs.size() - 1) /
                        static_cast<double>(kMaxQqMarkers - 1);
    for (std::size_t i = 0; i < kMaxQqMarkers; ++i) {
      keep[i] = static_cast<std::size_t>(std::llround(step * static_cast<double>(i)));
    }
  }

  double lo = pairs.front().first, hi = lo;
  for (const auto &[x, y] : pairs) {
    if (std::isfinite(x)) { lo = std::min(lo, x); hi = std::max(hi, x); }
    if (std::isfinite(y)) { lo = std::min(lo, y); hi = std::max(hi, y); }
  }
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double plot = kSize - 2 * kMargin;
  auto px = [&](double v) { return kMargin + (v - lo) / (hi - lo) * plot; };
  auto py = [&](double v) { return kSize - kMargin - (v - lo) / (hi - lo) * plot; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize
      << "\">\n"
      << "<title>" << escape(title) << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const auto base = fixed(kSize - kMargin);
  const auto left = fixed(kMargin);
  svg << "<line class=\"axis\" x1=\"" << left << "\" y1=\"" << base << "\" x2=\""
      << base << "\" y2=\"" << base << "\" stroke=\"black\"/>\n"
      << "<line class=\"axis\" x1=\"" << left << "\" y1=\"" << left << "\" x2=\""
      << left << "\" y2=\"" << base << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << fixed(kSize / 2) << "\" y=\"" << fixed(kSize - 12)
      << "\" text-anchor=\"middle\" font-size=\"12\">theoretical quantile</text>\n"
      << "<text x=\"14\" y=\"" << fixed(kSize / 2)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << fixed(kSize / 2) << ")\">sample quantile</text>\n"
      << "<text x=\"" << left << "\" y=\"" << fixed(kSize - kMargin + 16)
      << "\" font-size=\"10\">" << fixed(lo) << "</text>\n"
      << "<text x=\"" << base << "\" y=\"" << fixed(kSize - kMargin + 16)
      << "\" font-size=\"10\" text-anchor=\"end\">" << fixed(hi) << "</text>\n";
  svg << "<line class=\"reference\" x1=\"" << fixed(px(lo)) << "\" y1=\""
      << fixed(py(lo)) << "\" x2=\"" << fixed(px(hi)) << "\" y2=\"" << fixed(py(hi))
      << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
  svg << "<g fill=\"none\" stroke=\"steelblue\">\n";
  for (auto i : keep) {
    const auto &[x, y] = pairs[i];
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    svg << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y))
        << "\" r=\"2\"/>\n";
  }
  svg << "</g>\n</svg>\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << svg.str();
  if (!out) {
    throw std::runtime_error("write failed for " + path);
  }
}

} // namespace brsim::cli
