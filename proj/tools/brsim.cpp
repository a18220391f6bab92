// brsim: exact Brown-Resnick simulation, oracles and estimators.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "brsim/cli/commands.hpp"
#include "brsim/cli/io.hpp"

using brsim::cli::Command;
using brsim::cli::RunConfig;

namespace {

void add_model(CLI::App *app, RunConfig &c) {
  app->add_option("--alpha", c.alpha, "variogram exponent in (0,2]");
  app->add_option("--scale", c.scale, "variogram scale (gamma = scale*|t|^alpha/2)");
  app->add_option("--dim", c.dim, "spatial dimension");
}

void add_sites(CLI::App *app, RunConfig &c) {
  app->add_option("--sites", c.sites_file, "CSV file, one site per row");
  app->add_flag("--header", c.sites_header, "sites CSV has a header row");
  app->add_option("--grid", c.grid, "grid a:b:mesh[,a:b:mesh...], inclusive");
}

void add_run(CLI::App *app, RunConfig &c) {
  app->add_option("--reps", c.reps, "replications");
  app->add_option("--seed", c.seed, "64-bit seed (env BRSIM_SEED)");
  app->add_option("--workers", c.workers, "worker threads (env BRSIM_WORKERS)");
}

} // namespace

int main(int argc, char **argv) {
  RunConfig c;
  c.seed = brsim::cli::default_seed();
  c.workers = brsim::cli::default_workers();
  std::string y_list, alpha_list, lower_list;

  CLI::App app{"Exact simulation of Brown-Resnick max-stable fields"};
  app.require_subcommand(1);

  auto *sim = app.add_subcommand("simulate", "simulate the field at a set of sites");
  add_model(sim, c);
  add_sites(sim, c);
  add_run(sim, c);
  sim->add_option("--measure", c.measure, "anchor measure: uniform");
  sim->add_option("--measure-weights", c.measure_weights_file,
                  "CSV with one positive weight per site");
  sim->add_option("--marginals", c.marginals, "gumbel|frechet|weibull");
  sim->add_option("--out", c.out, "output CSV (default stdout)");
  sim->add_option("--diag", c.diag, "diagnostics JSON");
  sim->add_option("--max-clusters", c.max_clusters, "cluster safety cap");

  auto *oracle = app.add_subcommand("oracle", "Monte Carlo joint CDF P(eta <= y)");
  add_model(oracle, c);
  add_sites(oracle, c);
  add_run(oracle, c);
  oracle->add_option("--y", y_list, "thresholds, comma separated, one per site")
      ->required();
  oracle->add_option("--out", c.out, "output JSON (default stdout)");

  auto *validate = app.add_subcommand("validate", "run the validation experiments");
  add_model(validate, c);
  add_run(validate, c);
  validate->add_option("--s", c.s, "lag of the bivariate experiment");
  validate->add_option("--skip", c.skip, "check to skip (repeatable)");
  validate->add_option("--report", c.report, "report JSON (default stdout)");
  validate->add_option("--qq-svg", c.qq_svg, "Q-Q plot path");

  auto *pickands = app.add_subcommand("pickands", "finite-N Pickands estimate");
  add_model(pickands, c);
  add_run(pickands, c);
  pickands->add_option("--N", c.box_side, "box side");
  pickands->add_option("--mesh", c.mesh, "grid mesh");
  pickands->add_option("--lower", lower_list, "box corner, comma separated");
  pickands->add_option("--out", c.out, "output JSON (default stdout)");

  auto *theta = app.add_subcommand("theta", "discrete extremal index estimate");
  add_model(theta, c);
  add_run(theta, c);
  theta->add_option("--n", c.theta_n, "number of integer sites");
  theta->add_option("--out", c.out, "output JSON (default stdout)");

  auto *clusters = app.add_subcommand("clusters", "cluster counts per alpha");
  add_model(clusters, c);
  add_sites(clusters, c);
  add_run(clusters, c);
  clusters->add_option("--alphas", alpha_list, "alpha list, comma separated");
  clusters->add_option("--measure-weights", c.measure_weights_file,
                       "CSV with one positive weight per site");
  clusters->add_option("--out", c.out, "per-run counts CSV");
  clusters->add_option("--summary", c.summary, "summary JSON (default stdout)");
  clusters->add_option("--max-clusters", c.max_clusters, "cluster safety cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) {
      c.command = Command::oracle;
      if (oracle->count("--reps") == 0) c.reps = 1'000'000;
      c.y = brsim::cli::parse_double_list(y_list);
    } else if (validate->parsed()) {
      c.command = Command::validate;
    } else if (pickands->parsed()) {
      c.command = Command::pickands;
      if (pickands->count("--reps") == 0) c.reps = 100'000;
      if (!lower_list.empty()) c.box_lower = brsim::cli::parse_double_list(lower_list);
    } else if (theta->parsed()) {
      c.command = Command::theta;
      if (theta->count("--reps") == 0) c.reps = 100'000;
    } else if (clusters->parsed()) {
      c.command = Command::clusters;
      if (clusters->count("--reps") == 0) c.reps = 200;
      if (!alpha_list.empty()) c.alphas = brsim::cli::parse_double_list(alpha_list);
    } else {
      c.command = Command::simulate;
      if (sim->count("--reps") == 0) c.reps = 1;
    }
  } catch (const std::exception &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  return brsim::cli::run_command(c, std::cout, std::cerr);
}
