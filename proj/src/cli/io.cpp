#include "brsim/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "brsim/errors.hpp"

namespace brsim::cli {

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) {
    throw std::runtime_error("to_chars failed");
  }
  return std::string(buf, ptr);
}

namespace {

double parse_cell(std::string cell, const std::string &where) {
  const auto first = cell.find_first_not_of(" \t\r");
  const auto last = cell.find_last_not_of(" \t\r");
  if (first == std::string::npos) {
    throw UsageError("empty value in " + where);
  }
  cell = cell.substr(first, last - first + 1);
  if (!cell.empty() && cell.front() == '+') cell.erase(0, 1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw UsageError("non-numeric value '" + cell + "' in " + where);
  }
  return v;
}

} // namespace

std::vector<std::vector<double>> read_numeric_csv(const std::string &path,
                                                  bool has_header) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open " + path);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && has_header) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    const std::string where = path + ":" + std::to_string(line_no);
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_cell(cell, where));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw UsageError("inconsistent column count at " + where);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw UsageError(path + " contains no data rows");
  }
  return rows;
}

SiteSet read_sites_csv(const std::string &path, bool has_header) {
  const auto rows = read_numeric_csv(path, has_header);
  const auto dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (const auto &r : rows) coords.insert(coords.end(), r.begin(), r.end());
  return SiteSet(std::move(coords), static_cast<int>(dim));
}

std::vector<double> read_weights_csv(const std::string &path, bool has_header) {
  const auto rows = read_numeric_csv(path, has_header);
  std::vector<double> w;
  for (const auto &r : rows) w.push_back(r.front());
  return w;
}

std::vector<double> parse_double_list(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    out.push_back(parse_cell(cell, "list '" + text + "'"));
  }
  if (out.empty()) {
    throw UsageError("empty list");
  }
  return out;
}

void write_csv_row(std::ostream &out, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << format_double(row[i]);
  }
  out << '\n';
}

} // namespace brsim::cli
