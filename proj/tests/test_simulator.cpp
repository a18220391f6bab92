#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "brsim/distributions.hpp"
#include "brsim/errors.hpp"
#include "brsim/simulator.hpp"
#include "brsim/stats.hpp"

using namespace brsim;

namespace {

SimulationOptions opts(std::uint64_t seed, std::uint32_t rep = 0, int workers = 1) {
  SimulationOptions o;
  o.seed = seed;
  o.replication = rep;
  o.workers = workers;
  return o;
}

// Mean of inf{M : V_M + log n <= V_1} from the V stream alone.
double stopping_rule_mean(std::size_t n, int runs, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> e(1.0);
  double total = 0.0;
  for (int r = 0; r < runs; ++r) {
    double g = e(gen);
    const double v1 = -std::log(g);
    int m = 1;
    do {
      g += e(gen);
      ++m;
    } while (-std::log(g) + std::log(double(n)) > v1);
    total += m;
  }
  return total / runs;
}

} // namespace

TEST_CASE("single-site cluster equals v exactly") {
  const FactorizedGaussian fg(SiteSet::line({1.7}), VariogramModel(1.0));
  const auto m = SamplingMeasure::uniform(1);
  for (std::uint64_t i = 1; i <= 50; ++i) {
    RandomStream s(3, i);
    const double v = 0.37 * static_cast<double>(i) - 4.0;
    const auto c = generate_cluster(fg, m, v, s);
    CHECK(c.values[0] == v);
    CHECK(c.anchor == 0);
  }
}

TEST_CASE("identical sites give a flat cluster at v") {
  const FactorizedGaussian fg(SiteSet::line(std::vector<double>(6, 0.8)), VariogramModel(1.0));
  const auto m = SamplingMeasure::uniform(6);
  RandomStream s(3, 2);
  const auto c = generate_cluster(fg, m, 1.25, s);
  for (double x : c.values) CHECK(x == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("cluster dominance bound and normalization") {
  const FactorizedGaussian fg(SiteSet::grid("0:3:0.1"), VariogramModel(0.8));
  const SamplingMeasure m = [] {
    std::vector<double> w(31);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + double(i % 5);
    return SamplingMeasure(w);
  }();
  for (std::uint64_t i = 1; i <= 200; ++i) {
    RandomStream s(17, i);
    const double v = -std::log(0.01 * double(i));
    const auto c = generate_cluster(fg, m, v, s);
    double top = -INFINITY, total = 0.0;
    for (std::size_t j = 0; j < c.values.size(); ++j) {
      CHECK(c.values[j] <= v - m.log_weight(j));
      top = std::max(top, c.values[j] + m.log_weight(j));
      total += m.weight(j) * std::exp(c.values[j] - v);
    }
    CHECK(top <= v);
    CHECK(std::fabs(total - 1.0) <= 1e-10);
  }
}

TEST_CASE("single site: two clusters, standard Gumbel output") {
  const FactorizedGaussian fg(SiteSet::line({0.7}), VariogramModel(1.0));
  const auto m = SamplingMeasure::uniform(1);
  std::vector<double> x;
  for (std::uint32_t r = 0; r < 5000; ++r) {
    const auto s = simulate(fg, m, opts(5, r));
    REQUIRE(s.num_clusters == 2);
    CHECK(s.values[0] == s.v_trace[0]);
    CHECK(s.v_trace.size() == 2);
    x.push_back(s.values[0]);
  }
  CHECK(ks_statistic(x, [](double v) { return gumbel_cdf(v); }) <= ks_critical_1pct(x.size()));
}

TEST_CASE("identical sites follow the degenerate stopping rule run by run") {
  const std::size_t n = 8;
  const FactorizedGaussian fg(SiteSet::line(std::vector<double>(n, -1.5)), VariogramModel(1.0));
  const auto m = SamplingMeasure::uniform(n);
  const double log_n = std::log(double(n));
  for (std::uint32_t r = 0; r < 500; ++r) {
    const auto s = simulate(fg, m, opts(6, r));
    const auto &v = s.v_trace;
    REQUIRE(v.size() == s.num_clusters);
    for (std::size_t k = 1; k + 1 < v.size(); ++k) CHECK(v[k] + log_n > v[0]);
    CHECK(v.back() + log_n <= v[0] + 1e-12);
    for (double x : s.values) CHECK(x == s.values[0]);
  }
}

TEST_CASE("identical sites: mean count matches the V-stream oracle") {
  const std::size_t n = 16;
  const int runs = 4000;
  const FactorizedGaussian fg(SiteSet::line(std::vector<double>(n, 0.2)), VariogramModel(1.0));
  const auto samples = simulate_replications(fg, SamplingMeasure::uniform(n), opts(7), runs);
  double mean = 0.0;
  for (const auto &s : samples) mean += double(s.num_clusters) / runs;
  const double oracle = stopping_rule_mean(n, 200000, 99);
  // Count - 2 is Poisson with a Gamma-mixed mean (n-1) Exp(1): var = (n-1) + (n-1)^2.
  const double se = std::sqrt((n - 1.0) + (n - 1.0) * (n - 1.0)) / std::sqrt(double(runs));
  CHECK(std::fabs(mean - oracle) <= 4.0 * se);
  CHECK(std::fabs(oracle - (n + 1.0)) <= 4.0 * se / std::sqrt(50.0));
}

TEST_CASE("degenerate cluster counts grow with n") {
  double prev = 0.0;
  for (std::size_t n = 2; n <= 256; n *= 2) {
    const FactorizedGaussian fg(SiteSet::line(std::vector<double>(n, 1.0)), VariogramModel(1.0));
    const auto samples = simulate_replications(fg, SamplingMeasure::uniform(n), opts(8), 1500);
    double mean = 0.0;
    for (const auto &s : samples) mean += double(s.num_clusters) / samples.size();
    CAPTURE(n);
    CHECK(mean >= prev);
    prev = mean;
  }
}

TEST_CASE("output is independent of the worker count and matches the reference") {
  const std::vector<SiteSet> site_sets{SiteSet::grid("0:1:0.0625"),
                                       SiteSet::grid("0:1:0.25,0:2:0.5"),
                                       SiteSet::line({0.0, 0.0, 0.3, 5.0, 0.3})};
  for (const auto &sites : site_sets) {
    const FactorizedGaussian fg(sites, VariogramModel(1.3, 1.0, sites.dim()));
    std::vector<double> w(sites.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + double(i);
    for (const auto &m : {SamplingMeasure::uniform(sites.size()), SamplingMeasure(w)}) {
      for (std::uint32_t r = 0; r < 20; ++r) {
        const auto ref = simulate_reference(fg, m, opts(9, r));
        for (int k : {1, 2, 3, 8}) {
          const auto s = simulate(fg, m, opts(9, r, k));
          CHECK(s.values == ref.values);
          CHECK(s.num_clusters == ref.num_clusters);
          CHECK(s.v_trace == ref.v_trace);
          CHECK(s.terminal_v == ref.terminal_v);
        }
      }
    }
  }
}

TEST_CASE("replications equal independent calls") {
  const FactorizedGaussian fg(SiteSet::grid("0:2:0.5"), VariogramModel(1.0));
  const auto m = SamplingMeasure::uniform(fg.size());
  auto o = opts(10, 3, 4);
  const auto reps = simulate_replications(fg, m, o, 12);
  for (std::uint32_t r = 0; r < 12; ++r) {
    const auto s = simulate(fg, m, opts(10, 3 + r));
    CHECK(reps[r].values == s.values);
    CHECK(reps[r].replication == 3 + r);
  }
}

TEST_CASE("supremum over regenerated clusters reproduces the sample") {
  const FactorizedGaussian fg(SiteSet::grid("0:2:0.125"), VariogramModel(0.6));
  const auto m = SamplingMeasure::uniform(fg.size());
  for (std::uint32_t r = 0; r < 10; ++r) {
    const auto s = simulate(fg, m, opts(11, r, 4));
    CHECK(s.terminal_bound >= s.terminal_v);
    REQUIRE(s.v_trace.size() == s.num_clusters);
    std::vector<double> sup(fg.size(), -INFINITY);
    for (std::uint64_t i = 1; i <= s.num_clusters; ++i) {
      RandomStream stream(11, i, r);
      const auto c = generate_cluster(fg, m, s.v_trace[i - 1], stream);
      for (std::size_t j = 0; j < sup.size(); ++j) {
        CHECK(s.values[j] >= c.values[j]);
        sup[j] = std::max(sup[j], c.values[j]);
      }
    }
    CHECK(sup == s.values);
    // Nothing after termination can matter.
    double bound = INFINITY;
    for (std::size_t j = 0; j < sup.size(); ++j)
      bound = std::min(bound, sup[j] + m.log_weight(j));
    CHECK(s.terminal_v <= bound);
  }
}

TEST_CASE("safety caps") {
  const FactorizedGaussian fg(SiteSet::line({0.0}), VariogramModel(1.0));
  const auto m = SamplingMeasure::uniform(1);
  auto o = opts(1);
  o.max_clusters = 1;
  CHECK_THROWS_AS(simulate(fg, m, o), ResourceError);
  CHECK_THROWS_AS(simulate_reference(fg, m, o), ResourceError);
  o.max_clusters = 2;
  CHECK(simulate(fg, m, o).num_clusters == 2);

  const FactorizedGaussian big(SiteSet::grid("0:1:0.05"), VariogramModel(0.5));
  auto t = opts(2);
  t.max_trace = 3;
  const auto s = simulate(big, SamplingMeasure::uniform(big.size()), t);
  CHECK(s.v_trace.size() == 3);
  CHECK(s.trace_truncated == (s.num_clusters > 3));

  auto bad = opts(1);
  bad.workers = 0;
  CHECK_THROWS_AS(simulate(fg, m, bad), UsageError);
  CHECK_THROWS_AS(simulate(fg, SamplingMeasure::uniform(2), opts(1)), UsageError);
}

TEST_CASE("naive baseline") {
  const FactorizedGaussian origin(SiteSet::line({0.0}), VariogramModel(1.0));
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto s = simulate_naive(origin, opts(12, r), 1);
    VStream vs(RandomStream(12, 0, r));
    CHECK(s.values[0] == vs.next());
    CHECK(s.num_clusters == 1);
  }
  const FactorizedGaussian fg(SiteSet::grid("0:10:1"), VariogramModel(1.0));
  for (std::uint32_t r = 0; r < 50; ++r) {
    const auto a = simulate_naive(fg, opts(13, r), 5);
    const auto b = simulate_naive(fg, opts(13, r), 20);
    for (std::size_t j = 0; j < fg.size(); ++j) CHECK(a.values[j] <= b.values[j]);
  }
  CHECK_THROWS_AS(simulate_naive(fg, opts(1), 0), UsageError);
}

TEST_CASE("marginal transforms") {
  FieldSample s;
  s.values = {0.0, -3.0, 2.5};
  const auto f = transform_marginals(s, Marginal::frechet);
  const auto w = transform_marginals(s, Marginal::weibull);
  const auto g = transform_marginals(s, Marginal::gumbel);
  CHECK(f.values[0] == 1.0);
  CHECK(w.values[0] == -1.0);
  CHECK(g.values == s.values);
  for (double x : f.values) CHECK(x > 0.0);
  for (double x : w.values) CHECK(x < 0.0);
  CHECK(parse_marginal("weibull") == Marginal::weibull);
  CHECK_THROWS_AS(parse_marginal("normal"), UsageError);
}

TEST_CASE("Frechet marginal passes KS against exp(-1/x)") {
  const FactorizedGaussian fg(SiteSet::line({0.0, 0.5, 1.0}), VariogramModel(1.0));
  auto o = opts(14);
  const auto samples = simulate_replications(fg, SamplingMeasure::uniform(3), o, 10000);
  std::vector<double> x;
  for (auto s : samples) x.push_back(transform_marginals(std::move(s), Marginal::frechet).values[1]);
  CHECK(ks_statistic(x, frechet_cdf) <= ks_critical_1pct(x.size()));
}
