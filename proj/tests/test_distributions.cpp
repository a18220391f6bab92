#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "brsim/distributions.hpp"
#include "brsim/errors.hpp"
#include "brsim/simulator.hpp"

using namespace brsim;

namespace {

// 1/2 + integral_0^x phi by composite Simpson's rule.
double normal_cdf_quadrature(double x) {
  const int n = 20000;
  const double h = x / n;
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double acc = phi(0.0) + phi(x);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * phi(i * h);
  return 0.5 + acc * h / 3.0;
}

double neglog(const VariogramModel &m, double s, double y1, double y2) {
  const double p[] = {s};
  return bivariate_neglog(m, p, y1, y2);
}

} // namespace

TEST_CASE("Gumbel CDF") {
  CHECK(gumbel_cdf(0.0) == doctest::Approx(0.367879441171442).epsilon(1e-14));
  CHECK(gumbel_cdf(std::log(2.0)) == doctest::Approx(0.606530659712633).epsilon(1e-14));
  CHECK(gumbel_cdf(800.0) == 1.0);
  CHECK(gumbel_cdf(-800.0) == 0.0);
  CHECK(gumbel_cdf(1.5, 1.5) == gumbel_cdf(0.0));
  CHECK(gumbel_quantile(gumbel_cdf(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("standard normal CDF") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  for (double x : {0.1, 0.7, 1.3, 2.9, 5.0, 8.0}) {
    CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-12);
  }
  const double oracle = normal_cdf_quadrature(1.959963985);
  CHECK(std::fabs(oracle - 0.975) <= 1e-9);
  CHECK(std::fabs(std_normal_cdf(1.959963985) - oracle) <= 1e-12);
  for (double x : {0.3, 1.0, 2.5, 4.0}) {
    CHECK(std::fabs(std_normal_cdf(x) - normal_cdf_quadrature(x)) <= 1e-12);
  }
}

TEST_CASE("bivariate formula special cases") {
  const VariogramModel m(1.0);
  for (double s : {0.1, 0.5, 1.0 - 1.0 / 1024.0, 3.0}) {
    for (double x : {-1.0, 0.0, 2.0}) {
      CHECK(neglog(m, s, x, x) ==
            doctest::Approx(2.0 * std_normal_cdf(std::sqrt(s) / 2.0) * std::exp(-x))
                .epsilon(1e-13));
    }
  }
  CHECK(neglog(m, 1e-14, 0.4, 0.4) == doctest::Approx(std::exp(-0.4)).epsilon(1e-6));
  CHECK(neglog(m, 0.0, 0.4, 1.0) == std::exp(-0.4));
}

TEST_CASE("bivariate formula symmetry, monotonicity and bounds") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0), a(0.2, 2.0);
  for (int i = 0; i < 500; ++i) {
    const VariogramModel m(a(gen), 1.0 + 0.1 * (i % 7));
    const double s = u(gen), y1 = u(gen), y2 = u(gen);
    if (s == 0.0) continue;
    const double f = neglog(m, s, y1, y2);
    CHECK(f == doctest::Approx(neglog(m, -s, y2, y1)).epsilon(1e-14));
    CHECK(neglog(m, s, y1 + 0.1, y2) <= f);
    CHECK(neglog(m, s, y1, y2 + 0.1) <= f);
    CHECK(f >= std::max(std::exp(-y1), std::exp(-y2)) * (1 - 1e-14));
    CHECK(f <= (std::exp(-y1) + std::exp(-y2)) * (1 + 1e-14));
  }
}

TEST_CASE("fdd oracle: single site is exact") {
  const VariogramModel m(1.0);
  const double y[] = {0.4};
  OracleOptions o;
  o.reps = 1000;
  const auto est = fdd_cdf_oracle(SiteSet::line({2.3}), m, y, o);
  CHECK(est.value == doctest::Approx(std::exp(-std::exp(-0.4))).epsilon(1e-14));
  CHECK(est.std_error <= 1e-14);
  CHECK(est.reps == 1000);
}

TEST_CASE("fdd oracle agrees with the bivariate closed form") {
  OracleOptions o;
  o.reps = 200000;
  o.seed = 3;
  {
    const VariogramModel m(1.0);
    const double s = 0.6, x = 0.5;
    const double y[] = {x, x};
    const auto est = fdd_cdf_oracle(SiteSet::line({0.0, s}), m, y, o);
    const double exact = std::exp(-2.0 * std_normal_cdf(std::sqrt(s) / 2.0) * std::exp(-x));
    CHECK(std::fabs(est.value - exact) <= 3.0 * est.std_error);
  }
  {
    const VariogramModel m(1.5, 0.7);
    const double y[] = {0.3, -0.2};
    const auto est = fdd_cdf_oracle(SiteSet::line({1.0, 2.2}), m, y, o);
    const double exact = std::exp(-neglog(m, 1.2, 0.3, -0.2));
    CHECK(std::fabs(est.value - exact) <= 3.0 * est.std_error);
  }
}

TEST_CASE("fdd oracle is invariant to the shift anchor") {
  const VariogramModel m(1.0);
  const SiteSet sites = SiteSet::line({0.0, 0.5, 1.0});
  const double y[] = {0.5, 1.0, 0.0};
  OracleOptions a, b;
  a.reps = b.reps = 200000;
  a.seed = 4;
  b.seed = 5;
  b.anchor = 2;
  const auto ea = fdd_cdf_oracle(sites, m, y, a);
  const auto eb = fdd_cdf_oracle(sites, m, y, b);
  CHECK(std::fabs(ea.value - eb.value) <= 3.0 * std::hypot(ea.std_error, eb.std_error));
}

TEST_CASE("fdd oracle matches the empirical CDF of simulated fields") {
  const VariogramModel m(1.0);
  const SiteSet sites = SiteSet::line({0.0, 0.5, 1.0});
  const double y[] = {1.0, 1.0, 1.0};
  OracleOptions o;
  o.reps = 200000;
  o.seed = 6;
  const auto est = fdd_cdf_oracle(sites, m, y, o);

  const FactorizedGaussian fg(sites, m);
  SimulationOptions so;
  so.seed = 7;
  const std::size_t reps = 100000;
  const auto samples = simulate_replications(fg, SamplingMeasure::uniform(3), so, reps);
  double hits = 0;
  for (const auto &s : samples) {
    hits += (s.values[0] <= 1.0 && s.values[1] <= 1.0 && s.values[2] <= 1.0) ? 1 : 0;
  }
  const double p = hits / reps;
  const double se_sim = std::sqrt(p * (1 - p) / reps);
  CHECK(std::fabs(p - est.value) <= 3.0 * std::hypot(se_sim, est.std_error));
}

TEST_CASE("fdd oracle validation") {
  const VariogramModel m(1.0);
  const double y1[] = {0.0};
  const double y2[] = {0.0, NAN};
  CHECK_THROWS_AS(fdd_cdf_oracle(SiteSet::line({0.0, 1.0}), m, y1), UsageError);
  CHECK_THROWS_AS(fdd_cdf_oracle(SiteSet::line({0.0, 1.0}), m, y2), UsageError);
  OracleOptions o;
  o.reps = 0;
  CHECK_THROWS_AS(fdd_cdf_oracle(SiteSet::line({0.0}), m, y1, o), UsageError);
}

TEST_CASE("change of measure: degenerate grids") {
  const VariogramModel m(1.0);
  const auto origin = change_of_measure_check(m, SiteSet::line({0.0}), 0, 1000, 1);
  CHECK(origin.lhs == 1.0);
  CHECK(origin.rhs == 1.0);
  CHECK(origin.z_score == 0.0);

  // Away from the origin the left weight exp(W(t) - gamma(t)) is random with
  // mean 1, so only the right side is exact.
  const auto single = change_of_measure_check(m, SiteSet::line({0.5}), 0, 100000, 2);
  CHECK(single.rhs == 1.0);
  CHECK(std::fabs(single.z_score) <= 3.0);
}

TEST_CASE("change of measure identity holds statistically") {
  const auto a = change_of_measure_check(VariogramModel(1.0),
                                         SiteSet::line({0.0, 0.5, 1.0}), 1, 200000, 3);
  CHECK(std::fabs(a.z_score) <= 3.0);
  const auto b = change_of_measure_check(VariogramModel(2.0), SiteSet::line({0.0, 1.0}),
                                         1, 200000, 4);
  CHECK(std::fabs(b.z_score) <= 3.0);
  CHECK_THROWS_AS(change_of_measure_check(VariogramModel(1.0), SiteSet::line({0.0}), 1, 10, 1),
                  UsageError);
}
