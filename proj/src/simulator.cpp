#include "brsim/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "brsim/errors.hpp"
#include "brsim/parallel.hpp"

namespace brsim {

void generate_cluster(const FactorizedGaussian &fg,
                      const SamplingMeasure &measure, double v,
                      RandomStream &stream, ClusterDraw &out) {
  const std::size_t n = fg.size();
  if (measure.size() != n) {
    throw UsageError("sampling measure has " + std::to_string(measure.size()) +
                     " weights for " + std::to_string(n) + " sites");
  }
  out.v = v;
  out.anchor = measure.sample(stream);
  out.values.resize(n);
  std::span<double> x(out.values);
  fg.sample_drifted(out.anchor, stream, x);

  // log sum_l w_l exp(X_l), shifted by the largest term.
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < n; ++l) {
    top = std::max(top, measure.log_weight(l) + x[l]);
  }
  double acc = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    acc += std::exp(measure.log_weight(l) + x[l] - top);
  }
  const double lse = top + std::log(acc);

  for (std::size_t j = 0; j < n; ++j) {
    const double c = v + (x[j] - lse);
    x[j] = std::min(c, v - measure.log_weight(j));
  }
}

ClusterDraw generate_cluster(const FactorizedGaussian &fg,
                             const SamplingMeasure &measure, double v,
                             RandomStream &stream) {
  ClusterDraw out;
  generate_cluster(fg, measure, v, stream, out);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

// Running suprema plus the termination bound min_j(sup_j + log w_j).
class Suprema {
public:
  Suprema(const SamplingMeasure &measure, std::size_t n)
      : measure_(measure),
        sup_(n, -std::numeric_limits<double>::infinity()) {}

  void absorb(const std::vector<double> &cluster) {
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sup_.size(); ++j) {
      sup_[j] = std::max(sup_[j], cluster[j]);
      bound = std::min(bound, sup_[j] + measure_.log_weight(j));
    }
    bound_ = bound;
  }

  double bound() const { return bound_; }
  std::vector<double> take() { return std::move(sup_); }

private:
  const SamplingMeasure &measure_;
  std::vector<double> sup_;
  double bound_ = -std::numeric_limits<double>::infinity();
};

void check_inputs(const FactorizedGaussian &fg, const SamplingMeasure &measure,
                  const SimulationOptions &options) {
  if (measure.size() != fg.size()) {
    throw UsageError("sampling measure size does not match the site count");
  }
  if (options.workers < 1) {
    throw UsageError("workers must be >= 1");
  }
  if (options.max_clusters < 1) {
    throw UsageError("max_clusters must be >= 1");
  }
}

void record_v(FieldSample &s, double v, const SimulationOptions &options) {
  if (s.v_trace.size() < options.max_trace) {
    s.v_trace.push_back(v);
  } else {
    s.trace_truncated = true;
  }
}

[[noreturn]] void cap_exceeded(const SimulationOptions &options, double bound,
                               double v) {
  throw ResourceError(
      "no termination after " + std::to_string(options.max_clusters) +
      " clusters (seed " + std::to_string(options.seed) + ", replication " +
      std::to_string(options.replication) + "; bound " + std::to_string(bound) +
      " vs next v " + std::to_string(v) +
      "); the variogram kernel or sampling weights may be degenerate");
}

StreamKey cluster_key(const SimulationOptions &options, std::uint64_t index) {
  return StreamKey{options.seed, index, options.replication};
}

} // namespace

FieldSample simulate(const FactorizedGaussian &fg,
                     const SamplingMeasure &measure,
                     const SimulationOptions &options) {
  check_inputs(fg, measure, options);
  const auto start = Clock::now();
  const auto k_workers = static_cast<std::size_t>(options.workers);

  FieldSample out;
  out.seed = options.seed;
  out.replication = options.replication;

  VStream vstream(RandomStream(cluster_key(options, 0)));
  Suprema sup(measure, fg.size());
  std::vector<double> batch_v(k_workers);
  std::vector<ClusterDraw> batch(k_workers);

  double pending_v = vstream.next();
  std::uint64_t next_index = 1;
  bool done = false;
  while (!done) {
    const auto remaining = options.max_clusters - (next_index - 1);
    const auto width = static_cast<std::size_t>(
        std::min<std::uint64_t>(k_workers, remaining));
    if (width == 0) {
      cap_exceeded(options, sup.bound(), pending_v);
    }
    batch_v[0] = pending_v;
    for (std::size_t k = 1; k < width; ++k) {
      batch_v[k] = vstream.next();
    }

    // Clusters are pure functions of (v, index); any thread may compute any.
#pragma omp parallel for num_threads(options.workers) schedule(static, 1) if (width > 1)
    for (std::size_t k = 0; k < width; ++k) {
      RandomStream stream(cluster_key(options, next_index + k));
      generate_cluster(fg, measure, batch_v[k], stream, batch[k]);
    }

    // Merge in index order; clusters past the terminal one are discarded.
    for (std::size_t k = 0; k < width; ++k) {
      const std::uint64_t index = next_index + k;
      const bool terminal = index > 1 && sup.bound() >= batch_v[k];
      if (terminal) {
        out.terminal_v = batch_v[k];
        out.terminal_bound = sup.bound();
      }
      sup.absorb(batch[k].values);
      record_v(out, batch_v[k], options);
      out.num_clusters = index;
      if (terminal) {
        done = true;
        break;
      }
    }
    if (!done) {
      next_index += width;
      pending_v = vstream.next();
      if (next_index > options.max_clusters) {
        cap_exceeded(options, sup.bound(), pending_v);
      }
    }
  }
  out.values = sup.take();
  out.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

FieldSample simulate(const SiteSet &sites, const VariogramModel &model,
                     const SamplingMeasure &measure,
                     const SimulationOptions &options) {
  const FactorizedGaussian fg(sites, model);
  return simulate(fg, measure, options);
}

FieldSample simulate_reference(const FactorizedGaussian &fg,
                               const SamplingMeasure &measure,
                               const SimulationOptions &options) {
  check_inputs(fg, measure, options);
  const auto start = Clock::now();

  FieldSample out;
  out.seed = options.seed;
  out.replication = options.replication;

  VStream vstream(RandomStream(cluster_key(options, 0)));
  Suprema sup(measure, fg.size());

  std::uint64_t index = 1;
  double v = vstream.next();
  RandomStream first(cluster_key(options, index));
  ClusterDraw cluster = generate_cluster(fg, measure, v, first);
  while (true) {
    sup.absorb(cluster.values);
    record_v(out, v, options);
    if (index >= options.max_clusters) {
      cap_exceeded(options, sup.bound(), v);
    }
    v = vstream.next();
    ++index;
    const double bound = sup.bound();
    RandomStream stream(cluster_key(options, index));
    cluster = generate_cluster(fg, measure, v, stream);
    if (bound >= v) {
      sup.absorb(cluster.values);
      record_v(out, v, options);
      out.terminal_v = v;
      out.terminal_bound = bound;
      break;
    }
  }
  out.num_clusters = index;
  out.values = sup.take();
  out.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

std::vector<FieldSample> simulate_replications(const FactorizedGaussian &fg,
                                               const SamplingMeasure &measure,
                                               const SimulationOptions &options,
                                               std::size_t reps) {
  check_inputs(fg, measure, options);
  std::vector<FieldSample> out(reps);
  SimulationOptions per_rep = options;
  per_rep.workers = 1;
  std::exception_ptr failure;
#pragma omp parallel for num_threads(options.workers) schedule(dynamic, 1) firstprivate(per_rep)
  for (std::size_t r = 0; r < reps; ++r) {
    try {
      per_rep.replication = options.replication + static_cast<std::uint32_t>(r);
      out[r] = simulate(fg, measure, per_rep);
    } catch (...) {
#pragma omp critical(brsim_replication_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

FieldSample simulate_naive(const FactorizedGaussian &fg,
                           const SimulationOptions &options,
                           std::uint64_t truncation) {
  if (truncation < 1) {
    throw UsageError("truncation N must be >= 1");
  }
  const auto start = Clock::now();
  const std::size_t n = fg.size();
  std::vector<double> half_var(n);
  for (std::size_t j = 0; j < n; ++j) {
    half_var[j] = gamma(fg.model(), fg.sites().point(j));
  }

  FieldSample out;
  out.seed = options.seed;
  out.replication = options.replication;
  out.values.assign(n, -std::numeric_limits<double>::infinity());

  VStream vstream(RandomStream(cluster_key(options, 0)));
  std::vector<double> w(n);
  for (std::uint64_t i = 1; i <= truncation; ++i) {
    const double v = vstream.next();
    RandomStream stream(cluster_key(options, i));
    fg.sample_w(stream, w);
    for (std::size_t j = 0; j < n; ++j) {
      out.values[j] = std::max(out.values[j], v + w[j] - half_var[j]);
    }
    record_v(out, v, options);
  }
  out.num_clusters = truncation;
  out.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

FieldSample transform_marginals(FieldSample sample, Marginal target) {
  switch (target) {
  case Marginal::gumbel:
    break;
  case Marginal::frechet:
    for (double &x : sample.values) x = std::exp(x);
    break;
  case Marginal::weibull:
    for (double &x : sample.values) x = -std::exp(-x);
    break;
  }
  return sample;
}

Marginal parse_marginal(std::string_view name) {
  if (name == "gumbel") return Marginal::gumbel;
  if (name == "frechet") return Marginal::frechet;
  if (name == "weibull") return Marginal::weibull;
  throw UsageError("unknown marginal '" + std::string(name) +
                   "' (expected gumbel, frechet or weibull)");
}

} // namespace brsim
