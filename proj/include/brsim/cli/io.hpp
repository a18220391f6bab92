#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "brsim/site_set.hpp"

namespace brsim::cli {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

/// Reads a numeric CSV: one row per line, same column count on every row.
std::vector<std::vector<double>> read_numeric_csv(const std::string &path,
                                                  bool has_header);

/// Sites file: d columns, one site per row.
SiteSet read_sites_csv(const std::string &path, bool has_header);

/// One positive weight per row (first column), normalized by the caller.
std::vector<double> read_weights_csv(const std::string &path, bool has_header);

/// Comma-separated list of doubles, e.g. "0.5,1,1.5".
std::vector<double> parse_double_list(const std::string &text);

void write_csv_row(std::ostream &out, std::span<const double> row);

} // namespace brsim::cli
