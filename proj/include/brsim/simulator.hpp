#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "brsim/gaussian_sampler.hpp"
#include "brsim/point_process.hpp"
#include "brsim/random_stream.hpp"

namespace brsim {

/// One Poisson point v with its anchor site and cluster values
/// C_j = v + X_j - log(sum_l w_l exp(X_l)), X the drifted Gaussian draw.
struct ClusterDraw {
  double v = 0.0;
  std::size_t anchor = 0;
  std::vector<double> values;
};

/// Draws a cluster for point `v`. The stream supplies the anchor first, then
/// the Gaussian draw. Values are clamped to the dominance bound
/// v - log w_j so that the bound holds exactly in floating point.
ClusterDraw generate_cluster(const FactorizedGaussian &fg,
                             const SamplingMeasure &measure, double v,
                             RandomStream &stream);

/// In-place variant reusing `out.values` storage.
void generate_cluster(const FactorizedGaussian &fg,
                      const SamplingMeasure &measure, double v,
                      RandomStream &stream, ClusterDraw &out);

struct SimulationOptions {
  std::uint64_t seed = 1;
  std::uint32_t replication = 0;
  /// Clusters evaluated concurrently per step (K).
  int workers = 1;
  std::uint64_t max_clusters = 10'000'000;
  std::size_t max_trace = 100'000;
};

struct FieldSample {
  std::vector<double> values;
  std::uint64_t num_clusters = 0;
  /// Emitted V points in order, truncated at SimulationOptions::max_trace.
  std::vector<double> v_trace;
  bool trace_truncated = false;
  std::uint64_t seed = 0;
  std::uint32_t replication = 0;
  double elapsed_s = 0.0;
  /// V point that triggered termination and min_j(sup_j + log w_j) at that
  /// moment; terminal_bound >= terminal_v for every finished run.
  double terminal_v = 0.0;
  double terminal_bound = 0.0;
};

/// Exact sample of the Brown-Resnick field at the sampler's sites.
///
/// Clusters are generated in decreasing order of v, `workers` at a time,
/// until the next point v satisfies v <= min_j(sup_j + log w_j). The cluster
/// at that point is still incorporated and counted. Output depends only on
/// (seed, replication), never on `workers`.
///
/// Throws ResourceError once max_clusters clusters have been generated
/// without termination.
FieldSample simulate(const FactorizedGaussian &fg,
                     const SamplingMeasure &measure,
                     const SimulationOptions &options);

FieldSample simulate(const SiteSet &sites, const VariogramModel &model,
                     const SamplingMeasure &measure,
                     const SimulationOptions &options);

/// Serial one-cluster-at-a-time loop kept as the reference for simulate().
FieldSample simulate_reference(const FactorizedGaussian &fg,
                               const SamplingMeasure &measure,
                               const SimulationOptions &options);

/// `reps` independent samples with replication indices
/// options.replication + r, run in parallel over replications on
/// options.workers threads. Identical to calling simulate() per replication.
std::vector<FieldSample> simulate_replications(const FactorizedGaussian &fg,
                                               const SamplingMeasure &measure,
                                               const SimulationOptions &options,
                                               std::size_t reps);

/// Truncated baseline sup_{i<=N}(V_i + W_i(t_j) - gamma(t_j)). Biased for
/// any finite N; kept to show what the exact algorithm avoids. Uses the same
/// streams as simulate(), so runs with different N are coupled.
FieldSample simulate_naive(const FactorizedGaussian &fg,
                           const SimulationOptions &options,
                           std::uint64_t truncation);

enum class Marginal { gumbel, frechet, weibull };

/// Gumbel -> Frechet is exp(eta), Gumbel -> Weibull is -exp(-eta).
FieldSample transform_marginals(FieldSample sample, Marginal target);

Marginal parse_marginal(std::string_view name);

} // namespace brsim
