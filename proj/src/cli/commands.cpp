#include "brsim/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "brsim/cli/io.hpp"
#include "brsim/cli/svg.hpp"
#include "brsim/cli/validation.hpp"
#include "brsim/distributions.hpp"
#include "brsim/errors.hpp"
#include "brsim/gaussian_sampler.hpp"
#include "brsim/simulator.hpp"
#include "brsim/stats.hpp"

namespace brsim::cli {

using nlohmann::json;

namespace {

constexpr const char *kVersion = BRSIM_VERSION;

std::uint64_t env_u64(const char *name, std::uint64_t fallback) {
  const char *v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    std::size_t pos = 0;
    const auto parsed = std::stoull(v, &pos);
    if (pos != std::string(v).size()) return fallback;
    return parsed;
  } catch (...) {
    return fallback;
  }
}

json run_header(const RunConfig &c, std::size_t n) {
  return {{"seed", c.seed}, {"alpha", c.alpha}, {"n", n},
          {"reps", c.reps}, {"version", kVersion}};
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

void emit_json(const json &j, const std::string &path, std::ostream &out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

VariogramModel model_for(const RunConfig &c, int dim) {
  if (c.dim && *c.dim != dim) {
    throw UsageError("--dim " + std::to_string(*c.dim) +
                     " does not match the site dimension " + std::to_string(dim));
  }
  return VariogramModel(c.alpha, c.scale, dim);
}

SamplingMeasure measure_for(const RunConfig &c, std::size_t n) {
  if (!c.measure_weights_file.empty()) {
    auto w = read_weights_csv(c.measure_weights_file, false);
    if (w.size() != n) {
      throw UsageError("measure weights file has " + std::to_string(w.size()) +
                       " weights for " + std::to_string(n) + " sites");
    }
    return SamplingMeasure(std::move(w));
  }
  if (c.measure != "uniform") {
    throw UsageError("unknown --measure '" + c.measure +
                     "' (use uniform or --measure-weights)");
  }
  return SamplingMeasure::uniform(n);
}

void require_reps(const RunConfig &c) {
  if (c.reps < 1) throw UsageError("--reps must be >= 1");
}

} // namespace

std::uint64_t default_seed() { return env_u64("BRSIM_SEED", 1); }

int default_workers() {
  const auto w = env_u64("BRSIM_WORKERS", 1);
  return static_cast<int>(std::clamp<std::uint64_t>(w, 1, 1024));
}

SiteSet resolve_sites(const RunConfig &c) {
  const bool file = !c.sites_file.empty();
  const bool grid = !c.grid.empty();
  if (file == grid) {
    throw UsageError("give exactly one of --sites <csv> or --grid a:b:mesh");
  }
  return file ? read_sites_csv(c.sites_file, c.sites_header) : SiteSet::grid(c.grid);
}

int cmd_simulate(const RunConfig &c, std::ostream &out, std::ostream &) {
  require_reps(c);
  if (c.workers < 1) throw UsageError("--workers must be >= 1");
  const SiteSet sites = resolve_sites(c);
  const auto model = model_for(c, sites.dim());
  const auto measure = measure_for(c, sites.size());
  const auto marginal = parse_marginal(c.marginals);

  const auto start = std::chrono::steady_clock::now();
  const FactorizedGaussian fg(sites, model);
  SimulationOptions opt;
  opt.seed = c.seed;
  opt.workers = c.workers;
  opt.max_clusters = c.max_clusters;
  std::vector<FieldSample> samples;
  if (c.reps == 1) {
    samples.push_back(simulate(fg, measure, opt));
  } else {
    samples = simulate_replications(fg, measure, opt, c.reps);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ofstream file;
  std::ostream *csv = &out;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + c.out);
    csv = &file;
  }
  for (std::size_t j = 0; j < sites.size(); ++j) {
    *csv << (j ? "," : "") << "site_" << j;
  }
  *csv << '\n';
  std::vector<std::uint64_t> counts;
  counts.reserve(samples.size());
  for (auto &s : samples) {
    counts.push_back(s.num_clusters);
    const auto t = transform_marginals(std::move(s), marginal);
    write_csv_row(*csv, t.values);
  }
  if (!*csv) throw std::runtime_error("failed writing simulation output");

  if (!c.diag.empty()) {
    json d = run_header(c, sites.size());
    d["scale"] = c.scale;
    d["dim"] = sites.dim();
    d["workers"] = c.workers;
    d["marginals"] = c.marginals;
    d["jitter_used"] = fg.jitter_used();
    d["cluster_counts"] = counts;
    d["wall_time_s"] = wall;
    write_text(c.diag, d.dump(2) + "\n");
  }
  return 0;
}

int cmd_oracle(const RunConfig &c, std::ostream &out, std::ostream &) {
  require_reps(c);
  const SiteSet sites = resolve_sites(c);
  const auto model = model_for(c, sites.dim());
  if (c.y.size() != sites.size()) {
    throw UsageError("--y needs one threshold per site (" +
                     std::to_string(sites.size()) + ")");
  }
  OracleOptions opt;
  opt.reps = c.reps;
  opt.seed = c.seed;
  opt.workers = c.workers;
  const auto est = fdd_cdf_oracle(sites, model, c.y, opt);
  json j = run_header(c, sites.size());
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["y"] = c.y;
  emit_json(j, c.out, out);
  return 0;
}

const std::vector<std::string> &validate_check_names() {
  static const std::vector<std::string> names{
      "marginal", "bivariate", "mu_invariance", "stationarity",
      "parallel_determinism"};
  return names;
}

int cmd_validate(const RunConfig &c, std::ostream &out, std::ostream &err) {
  require_reps(c);
  if (c.workers < 1) throw UsageError("--workers must be >= 1");
  for (const auto &name : c.skip) {
    const auto &names = validate_check_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw UsageError("unknown check '" + name + "' in --skip");
    }
  }
  if (!(c.s > 0.0)) throw UsageError("--s must be positive");
  auto wanted = [&](const std::string &name) {
    return std::find(c.skip.begin(), c.skip.end(), name) == c.skip.end();
  };
  const VariogramModel model(c.alpha, c.scale, 1);
  const ExperimentSettings settings{c.reps, c.seed, c.workers};
  const SiteSet five = SiteSet::line({0.0, 0.25, 0.5, 0.75, 1.0});

  std::vector<CheckResult> results;
  if (wanted("marginal")) {
    const FactorizedGaussian fg(SiteSet::line({0.7}), model);
    results.push_back(check_marginal(fg, 0, settings));
  }
  if (wanted("bivariate")) {
    std::vector<std::pair<double, double>> qq;
    results.push_back(check_bivariate(model, c.s, {c.reps, c.seed + 1, c.workers}, &qq));
    const std::string svg = c.qq_svg.empty() ? "validate_qq.svg" : c.qq_svg;
    emit_svg_qq(qq, svg, "eta(0) v eta(s) - log(2 Phi(sqrt(s)/2)) vs Gumbel");
    results.back().detail["qq_svg"] = svg;
  }
  if (wanted("mu_invariance")) {
    const FactorizedGaussian fg(five, model);
    results.push_back(check_mu_invariance(fg, {0.6, 0.1, 0.1, 0.1, 0.1},
                                          {c.reps, c.seed + 2, c.workers}));
  }
  if (wanted("stationarity")) {
    results.push_back(check_stationarity(model, five, 10.0,
                                         {c.reps, c.seed + 3, c.workers}));
  }
  if (wanted("parallel_determinism")) {
    const FactorizedGaussian fg(SiteSet::grid("0:1:0.03125"), model);
    results.push_back(check_parallel_determinism(fg, 100, c.seed + 4,
                                                 std::max(8, c.workers)));
  }

  bool all = true;
  json checks = json::array();
  for (const auto &r : results) {
    all = all && r.passed;
    checks.push_back(to_json(r));
    err << (r.passed ? "PASS " : "FAIL ") << r.name << " statistic=" << r.statistic
        << " threshold=" << r.threshold << '\n';
  }
  json report = run_header(c, 0);
  report.erase("n");
  report["scale"] = c.scale;
  report["s"] = c.s;
  report["checks"] = checks;
  report["all_passed"] = all;
  emit_json(report, c.report, out);
  return all ? 0 : 1;
}

int cmd_pickands(const RunConfig &c, std::ostream &out, std::ostream &) {
  require_reps(c);
  const int dim = c.dim.value_or(1);
  const VariogramModel model(c.alpha, c.scale, dim);
  std::vector<double> lower = c.box_lower;
  if (lower.empty()) lower.assign(static_cast<std::size_t>(dim), 0.0);
  if (lower.size() != static_cast<std::size_t>(dim)) {
    throw UsageError("--lower must have one coordinate per dimension");
  }
  EstimatorOptions opt;
  opt.reps = c.reps;
  opt.seed = c.seed;
  opt.workers = c.workers;
  const auto est = pickands_estimate(model, lower, c.box_side, c.mesh, opt);
  const auto n = box_grid(lower, c.box_side, c.mesh).size();
  json j = run_header(c, n);
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["N"] = c.box_side;
  j["mesh"] = c.mesh;
  j["lower"] = lower;
  emit_json(j, c.out, out);
  return 0;
}

int cmd_theta(const RunConfig &c, std::ostream &out, std::ostream &) {
  require_reps(c);
  const VariogramModel model(c.alpha, c.scale, 1);
  EstimatorOptions opt;
  opt.reps = c.reps;
  opt.seed = c.seed;
  opt.workers = c.workers;
  const auto est = extremal_index_estimate(model, c.theta_n, opt);
  json j = run_header(c, c.theta_n);
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  emit_json(j, c.out, out);
  return 0;
}

int cmd_clusters(const RunConfig &c, std::ostream &out, std::ostream &) {
  require_reps(c);
  if (c.alphas.empty()) throw UsageError("--alphas is required (e.g. 0.5,1,1.5,2)");
  const SiteSet sites = resolve_sites(c);
  const auto measure = measure_for(c, sites.size());

  std::ofstream csv;
  if (!c.out.empty()) {
    csv.open(c.out, std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + c.out);
    csv << "alpha,replication,num_clusters\n";
  }
  json summaries = json::array();
  for (double alpha : c.alphas) {
    RunConfig per = c;
    per.alpha = alpha;
    const auto model = model_for(per, sites.dim());
    const FactorizedGaussian fg(sites, model);
    SimulationOptions opt;
    opt.seed = c.seed;
    opt.workers = c.workers;
    opt.max_clusters = c.max_clusters;
    const auto samples = simulate_replications(fg, measure, opt, c.reps);
    std::vector<std::uint64_t> counts;
    for (std::size_t r = 0; r < samples.size(); ++r) {
      counts.push_back(samples[r].num_clusters);
      if (csv.is_open()) {
        csv << format_double(alpha) << ',' << r << ',' << samples[r].num_clusters
            << '\n';
      }
    }
    const auto s = cluster_count_stats(counts);
    json hist = json::array();
    for (const auto &b : s.histogram) {
      hist.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
    }
    summaries.push_back({{"alpha", alpha},
                         {"q25", s.q25},
                         {"median", s.median},
                         {"q75", s.q75},
                         {"mean", s.mean},
                         {"min", s.min},
                         {"max", s.max},
                         {"histogram", hist}});
  }
  if (csv.is_open() && !csv) throw std::runtime_error("failed writing " + c.out);
  json j = run_header(c, sites.size());
  j["alpha"] = c.alphas;
  j["summaries"] = summaries;
  emit_json(j, c.summary, out);
  return 0;
}

int run_command(const RunConfig &c, std::ostream &out, std::ostream &err) {
  try {
    switch (c.command) {
    case Command::simulate: return cmd_simulate(c, out, err);
    case Command::oracle: return cmd_oracle(c, out, err);
    case Command::validate: return cmd_validate(c, out, err);
    case Command::pickands: return cmd_pickands(c, out, err);
    case Command::theta: return cmd_theta(c, out, err);
    case Command::clusters: return cmd_clusters(c, out, err);
    }
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

} // namespace brsim::cli
