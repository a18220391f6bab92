#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "brsim/errors.hpp"
#include "brsim/gaussian_sampler.hpp"

using namespace brsim;

namespace {

struct Moments {
  std::vector<double> mean;
  std::vector<std::vector<double>> cov;
};

template <typename Draw>
Moments moments(std::size_t n, int reps, Draw draw) {
  Moments m{std::vector<double>(n, 0.0),
            std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  std::vector<std::vector<double>> xs;
  xs.reserve(reps);
  for (int r = 0; r < reps; ++r) xs.push_back(draw(r));
  for (const auto &x : xs)
    for (std::size_t j = 0; j < n; ++j) m.mean[j] += x[j] / reps;
  for (const auto &x : xs)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        m.cov[j][k] += (x[j] - m.mean[j]) * (x[k] - m.mean[k]) / (reps - 1);
  return m;
}

} // namespace

TEST_CASE("single site at the origin is pinned to zero") {
  const FactorizedGaussian fg(SiteSet::line({0.0}), VariogramModel(1.0));
  CHECK(fg.covariance()(0, 0) == 0.0);
  CHECK(fg.factor().size() == 0);
  for (std::uint64_t r = 0; r < 100; ++r) {
    RandomStream s(1, r);
    CHECK(fg.sample_w(s)[0] == 0.0);
  }
  RandomStream s(1, 1);
  CHECK(fg.sample_drifted(0, s)[0] == 0.0);
}

TEST_CASE("covariance matches the min(s,t) oracle for alpha = 1") {
  const FactorizedGaussian fg(SiteSet::line({0.0, 0.5, 1.0}), VariogramModel(1.0));
  const auto sigma = fg.covariance();
  const double pts[] = {0.0, 0.5, 1.0};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(sigma(a, b) == doctest::Approx(std::min(pts[a], pts[b])));
  CHECK(fg.jitter_used() == 0.0);
  const auto rebuilt = fg.reconstructed_covariance();
  CHECK((rebuilt - sigma).cwiseAbs().maxCoeff() <= 1e-8 * sigma.diagonal().maxCoeff());
}

TEST_CASE("duplicate sites share one representative and one value") {
  const FactorizedGaussian fg(SiteSet::line({0.3, 0.3}), VariogramModel(1.0));
  CHECK(fg.sites().num_representatives() == 1);
  for (std::uint64_t r = 0; r < 50; ++r) {
    RandomStream s(5, r);
    const auto w = fg.sample_w(s);
    CHECK(w[0] == w[1]);
    CHECK(w[0] != 0.0);
  }
  const FactorizedGaussian same(SiteSet::line({2.0, 2.0, 2.0}), VariogramModel(1.5));
  RandomStream s(5, 9);
  const auto x = same.sample_drifted(1, s);
  CHECK(x[0] == x[1]);
  CHECK(x[1] == x[2]);
}

TEST_CASE("drift table entries") {
  const FactorizedGaussian fg(SiteSet::line({0.0, 0.4, 2.0, 0.4}), VariogramModel(1.0));
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(fg.drift(j, j) == 0.0);
    for (std::size_t k = 0; k < 4; ++k) {
      const double expect = 0.5 * std::fabs(fg.sites().point(j)[0] - fg.sites().point(k)[0]);
      CHECK(fg.drift(j, k) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("sample variance and covariance at 1e5 draws") {
  const VariogramModel m(1.0);
  const FactorizedGaussian one(SiteSet::line({1.0}), m);
  const auto mo = moments(1, 100000, [&](int r) {
    RandomStream s(21, static_cast<std::uint64_t>(r));
    return one.sample_w(s);
  });
  CHECK(std::fabs(mo.cov[0][0] - 1.0) <= 0.02);

  const FactorizedGaussian two(SiteSet::line({0.5, 1.0}), m);
  const auto mt = moments(2, 100000, [&](int r) {
    RandomStream s(22, static_cast<std::uint64_t>(r));
    return two.sample_w(s);
  });
  CHECK(std::fabs(mt.cov[0][1] - 0.5) <= 0.02);
}

TEST_CASE("drifted draw has mean -gamma(t - anchor)") {
  const FactorizedGaussian fg(SiteSet::line({0.0, 1.0}), VariogramModel(1.0));
  const auto mo = moments(2, 100000, [&](int r) {
    RandomStream s(23, static_cast<std::uint64_t>(r));
    return fg.sample_drifted(0, s);
  });
  CHECK(std::fabs(mo.mean[1] + 0.5) <= 0.02);
  CHECK(mo.mean[0] == 0.0);
}

TEST_CASE("empirical moments match the covariance within 4 standard errors") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<double> pts(8);
  for (double &p : pts) p = u(gen);
  const int reps = 100000;
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    CAPTURE(alpha);
    const FactorizedGaussian fg(SiteSet::line(pts), VariogramModel(alpha));
    const auto sigma = fg.covariance();
    const auto mo = moments(8, reps, [&](int r) {
      RandomStream s(31, static_cast<std::uint64_t>(r));
      return fg.sample_w(s);
    });
    for (int j = 0; j < 8; ++j) {
      CHECK(std::fabs(mo.mean[j]) <= 4.0 * std::sqrt(sigma(j, j) / reps) + 1e-12);
      for (int k = 0; k < 8; ++k) {
        const double se =
            std::sqrt((sigma(j, j) * sigma(k, k) + sigma(j, k) * sigma(j, k)) / reps);
        CHECK(std::fabs(mo.cov[j][k] - sigma(j, k)) <= 4.0 * se + 1e-9);
      }
    }
  }
}

TEST_CASE("drifted draw differs from the plain draw by the drift column exactly") {
  const FactorizedGaussian fg(SiteSet::line({0.1, 0.7, 1.9, 3.0}), VariogramModel(1.2));
  for (std::size_t k = 0; k < 4; ++k) {
    RandomStream a(8, 100 + k), b(8, 100 + k);
    const auto w = fg.sample_w(a);
    const auto x = fg.sample_drifted(k, b);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(w[j] - x[j] == doctest::Approx(fg.drift(j, k)).epsilon(1e-14).scale(std::fabs(w[j])));
    }
  }
}

TEST_CASE("identical stream state gives identical draws") {
  const FactorizedGaussian fg(SiteSet::grid("0:2:0.25,0:1:0.5"), VariogramModel(0.7, 1.0, 2));
  RandomStream a(99, 4, 2), b(99, 4, 2);
  CHECK(fg.sample_w(a) == fg.sample_w(b));
}

TEST_CASE("rank-deficient alpha = 2 covariance is factorized with jitter") {
  const FactorizedGaussian fg(SiteSet::grid("10:11:0.05"), VariogramModel(2.0));
  const auto sigma = fg.covariance();
  const auto rebuilt = fg.reconstructed_covariance();
  CHECK(fg.jitter_used() > 0.0);
  CHECK(fg.jitter_used() <= 1e-6 * sigma.diagonal().mean() * 1.0000001);
  CHECK((rebuilt - sigma).cwiseAbs().maxCoeff() <=
        fg.jitter_used() + 1e-8 * sigma.diagonal().maxCoeff());
}

TEST_CASE("errors") {
  const FactorizedGaussian fg(SiteSet::line({0.0, 1.0}), VariogramModel(1.0));
  RandomStream s(1, 1);
  CHECK_THROWS_AS(fg.sample_drifted(2, s), UsageError);
  CHECK_THROWS_AS(FactorizedGaussian(SiteSet::line({1.0}), VariogramModel(1.0, 1.0, 2)),
                  UsageError);

  // r^4 is not a valid variogram; its kernel is indefinite.
  const auto bad = VariogramModel::custom([](double r) { return r * r * r * r; }, 1);
  try {
    FactorizedGaussian f(SiteSet::line({0.5, 1.0, 1.5, 2.0, 3.0}), bad);
    FAIL("expected a factorization failure");
  } catch (const NumericalError &e) {
    CHECK(std::string(e.what()).find("site diameter=2.5") != std::string::npos);
  }
}
