#include "doctest.h"

#include <cmath>
#include <random>

#include "msa/disorder.hpp"
#include "msa/errors.hpp"

using namespace msa;

namespace {

std::vector<LatticePoint> interval(int lo, int hi) {
  std::vector<LatticePoint> out;
  for (int x = lo; x <= hi; ++x) out.push_back(LatticePoint::single({x}));
  return out;
}

}  // namespace

TEST_CASE("cdf increments") {
  auto u01 = MarginalDistribution::uniform(0, 1);
  auto u11 = MarginalDistribution::uniform(-1, 1);
  CHECK(cdf_increment(u01, 0.3, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(cdf_increment(u01, 2.0, 0.5) == 0.0);
  CHECK(cdf_increment(u11, -0.5, 0.2) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(u11.holder_constant() == 0.5);
}

TEST_CASE("piecewise linear marginal") {
  auto d = MarginalDistribution::piecewise_linear({0, 0.5, 1}, {0, 0.01, 1});
  CHECK(d.cdf(0.25) == doctest::Approx(0.005));
  CHECK(d.cdf(0.75) == doctest::Approx(0.505));
  CHECK(d.quantile(0.505) == doctest::Approx(0.75));
  CHECK(d.holder_constant() == doctest::Approx(1.98));
  CHECK_THROWS_AS(MarginalDistribution::piecewise_linear({0, 1}, {0, 0.5}), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::piecewise_linear({0, 0}, {0, 1}), DomainError);
}

TEST_CASE("holder bound on random increments") {
  auto u = MarginalDistribution::uniform(-1, 1);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(-2, 2), e(0, 1);
  for (int i = 0; i < 1000; ++i) {
    double eps = e(rng);
    CHECK(cdf_increment(u, t(rng), eps) <= u.holder_constant() * eps + 1e-15);
  }
}

TEST_CASE("overlapping regions agree") {
  auto u = MarginalDistribution::uniform(-1, 1);
  auto a = sample(u, 99, interval(-5, 5));
  auto b = sample(u, 99, interval(0, 10));
  for (int x = 0; x <= 5; ++x) {
    auto p = LatticePoint::single({x});
    CHECK(a.at(p) == b.at(p));
  }
  auto c = sample(u, 100, interval(0, 0));
  CHECK(c.at(LatticePoint::single({0})) != a.at(LatticePoint::single({0})));
  CHECK_THROWS_AS(a.at(LatticePoint::single({6})), CoverageError);
}

TEST_CASE("support and mean") {
  auto u11 = MarginalDistribution::uniform(-1, 1);
  auto s = sample(u11, 3, interval(0, 999));
  for (const auto& p : s.sites()) {
    CHECK(s.at(p) >= -1.0);
    CHECK(s.at(p) <= 1.0);
  }
  auto u01 = MarginalDistribution::uniform(0, 1);
  auto big = sample(u01, 12345, interval(0, 9999));
  double sum = 0;
  for (const auto& p : big.sites()) sum += big.at(p);
  const double mean = sum / 1e4;
  CHECK(std::abs(mean - 0.5) < 0.02);
  // frozen regression value for this generator and seed
  CHECK(mean == doctest::Approx(0.50044793861113901).epsilon(1e-12));
}

TEST_CASE("seeds") {
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
  CHECK(trial_seed(7, 3) == trial_seed(7, 3));
  auto p = LatticePoint::single({2});
  double v = site_uniform(4, p);
  CHECK(v >= 0.0);
  CHECK(v < 1.0);
  CHECK(v == site_uniform(4, p));
}

TEST_CASE("constant and restricted samples") {
  auto sites = interval(0, 3);
  auto c = DisorderSample::constant(sites, 0.5);
  CHECK(c.size() == 4);
  CHECK(c.at(sites[2]) == 0.5);
  auto r = c.restricted(std::span(sites).subspan(1, 2));
  CHECK(r.size() == 2);
  CHECK_FALSE(r.covers(sites[0]));
}
