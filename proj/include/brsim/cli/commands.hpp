#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "brsim/site_set.hpp"

namespace brsim::cli {

enum class Command { simulate, oracle, validate, pickands, theta, clusters };

/// Everything one CLI invocation needs. The seed is echoed into every JSON
/// output so runs can be replayed.
struct RunConfig {
  Command command = Command::simulate;

  double alpha = 1.0;
  double scale = 1.0;
  std::optional<int> dim;

  std::string sites_file;
  bool sites_header = false;
  std::string grid;

  std::string measure = "uniform";
  std::string measure_weights_file;

  std::size_t reps = 10'000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t max_clusters = 10'000'000;

  std::string marginals = "gumbel";
  std::string out;
  std::string diag;

  // oracle
  std::vector<double> y;

  // validate
  double s = 1.0 - 1.0 / 1024.0;
  std::vector<std::string> skip;
  std::string report;
  std::string qq_svg;

  // pickands / theta
  double box_side = 1.0;
  double mesh = 1.0 / 32.0;
  std::vector<double> box_lower;
  std::size_t theta_n = 64;

  // clusters
  std::vector<double> alphas;
  std::string summary;
};

/// Seed and worker defaults, overridable through BRSIM_SEED / BRSIM_WORKERS.
std::uint64_t default_seed();
int default_workers();

/// Resolves --sites / --grid into a site set; exactly one must be given.
SiteSet resolve_sites(const RunConfig &config);

/// Each command writes its primary output (CSV or JSON) to `out` unless a
/// file path is configured, reports problems on `err`, and returns the exit
/// code. Usage errors return 2, failed checks 1.
int cmd_simulate(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_oracle(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_validate(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_pickands(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_theta(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_clusters(const RunConfig &config, std::ostream &out, std::ostream &err);

int run_command(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Names of the checks cmd_validate runs, in report order.
const std::vector<std::string> &validate_check_names();

} // namespace brsim::cli
