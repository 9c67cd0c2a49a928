#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "msa/errors.hpp"
#include "msa/harness.hpp"

using namespace msa;

namespace {

LatticePoint pt1(int x) { return LatticePoint::single({x}); }

ModelSpec strong(double g) {
  ModelSpec m;
  m.g = g;
  m.distribution = MarginalDistribution::uniform(-1, 1);
  return m;
}

}  // namespace

TEST_CASE("scale schedules") {
  CHECK(schedule(8, 3).scales == std::vector<int>{8, 22, 103, 1045});
  CHECK(schedule(4, 2).scales == std::vector<int>{4, 8, 22});
  CHECK_THROWS_AS(schedule(2, 2), DomainError);
  CHECK_THROWS_AS(schedule(1, 1), DomainError);
  // floor(L^{3/2}) computed without rounding trouble at perfect squares
  CHECK(schedule(16, 1).scales[1] == 64);
  CHECK(schedule(9, 1).scales[1] == 27);
}

TEST_CASE("mass sequence") {
  auto s = mass_sequence(2.0, 4, 3);
  REQUIRE(s.values.size() == 3);
  const double step = std::pow(4.0, -0.125);
  CHECK(s.values[0] == 2.0);
  CHECK(s.values[1] == doctest::Approx(2.0 - step));
  CHECK(s.values[2] == doctest::Approx(2.0 - 2 * step));
  CHECK_THROWS_AS(mass_sequence(0.5, 4, 2), DomainError);
}

TEST_CASE("wilson interval") {
  auto e = wilson_interval(0, 0);
  CHECK(e.lo == 0.0);
  CHECK(e.hi == 1.0);
  // closed form for k = 5, n = 10
  const double z = 1.959963984540054, n = 10, p = 0.5;
  const double c = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double h = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  auto w = wilson_interval(5, 10);
  CHECK(w.lo == doctest::Approx(c - h).epsilon(1e-14));
  CHECK(w.hi == doctest::Approx(c + h).epsilon(1e-14));
  auto zero = wilson_interval(0, 50);
  CHECK(std::abs(zero.lo) < 1e-15);
  CHECK(zero.hi > 0.0);
}

TEST_CASE("empty trial count") {
  auto r = estimate_ss(strong(10), 0.0, 0.5, 8, 0, 1);
  CHECK(r.trials == 0);
  CHECK_FALSE(r.p_defined);
  CHECK(std::isnan(r.p_hat));
  CHECK(r.ci.lo == 0.0);
  CHECK(r.ci.hi == 1.0);
}

TEST_CASE("no singular boxes far from the spectrum") {
  auto m = strong(0.0);
  HarnessOptions o;
  auto r = estimate_ss(m, 50.0, 1.0, 8, 40, 3, o);
  CHECK(r.singular_count == 0);
  CHECK(r.resonant_count == 0);
  CHECK(r.p_hat == 0.0);
}

TEST_CASE("thread count does not change results") {
  HarnessOptions one, four;
  four.threads = 4;
  auto a = run_trials(strong(10), 0.0, 0.5, 8, 120, 20240611, one, 3);
  auto b = run_trials(strong(10), 0.0, 0.5, 8, 120, 20240611, four, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].singular == b[t].singular);
    CHECK(a[t].resonant == b[t].resonant);
    CHECK(a[t].cnr_fail == b[t].cnr_fail);
    CHECK(a[t].not_cnr_ell == b[t].not_cnr_ell);
    CHECK(a[t].two_singular_ell == b[t].two_singular_ell);
  }
}

TEST_CASE("parallel_for visits every index and rethrows the lowest failure") {
  std::vector<int> seen(100, 0);
  parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i] += 1; });
  CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}

TEST_CASE("wegner on a single site") {
  ModelSpec m;
  m.g = 1.0;
  m.distribution = MarginalDistribution::uniform(0, 1);
  auto r = wegner_estimate(m, 0.5, 1, 0.1, 4000, 9);
  REQUIRE(r.exact.has_value());
  CHECK(*r.exact == doctest::Approx(0.2));
  CHECK(r.ci.lo <= *r.exact);
  CHECK(*r.exact <= r.ci.hi);
  CHECK(r.volume == 1);
  CHECK(r.standard_bound == doctest::Approx(0.2));
  auto zero = wegner_estimate(m, 0.5, 1, 0.0, 500, 9);
  CHECK(zero.hits == 0);
  CHECK(*zero.exact == 0.0);
}

TEST_CASE("wegner standard bound on a chain") {
  auto r = wegner_estimate(strong(5), 0.0, 8, 1e-3, 300, 4);
  // |Lambda| C (2 eps / g): 15 * 0.5 * 4e-4
  CHECK(r.volume == 15);
  CHECK(r.standard_bound == doctest::Approx(15 * 0.5 * 2e-3 / 5));
  CHECK(r.standard_holds);
  CHECK_FALSE(r.exact.has_value());
}

TEST_CASE("induction flags") {
  auto vac = [] {
    HarnessOptions o;
    o.p = 0.0;
    return verify_induction(strong(10), 0.0, 0.5, 4, 1, 20, 1, o);
  }();
  REQUIRE(vac.steps.size() == 1);
  CHECK(vac.steps[0].vacuous);
  CHECK(vac.steps[0].pass);

  ModelSpec flat;
  flat.g = 0.0;
  auto deg = verify_induction(flat, 0.5, 0.5, 4, 1, 10, 1);
  CHECK(deg.steps[0].degenerate);
  CHECK_FALSE(deg.steps[0].pass);
  // every trial sees the same operator
  CHECK((deg.scales[0].singular_count == 0 || deg.scales[0].singular_count == 10));
  CHECK((deg.scales[1].singular_count == 0 || deg.scales[1].singular_count == 10));
}

TEST_CASE("tensor spectrum, single sites") {
  DisorderSample v;
  v.set(pt1(0), 0.3);
  v.set(pt1(5), -0.7);
  auto c = tensor_spectrum_check(Box(pt1(0), 1), Box(pt1(5), 1), 2.0, v);
  CHECK(c.size == 1);
  CHECK(c.deviation <= 1e-15);
  auto h = assemble(Region({LatticePoint({0, 5}, 2, 1)}), 2.0, v);
  CHECK(spectrum(h).values(0) == doctest::Approx(2.0 * (0.3 - 0.7)));
}

TEST_CASE("tensor spectrum, two-site factors") {
  Region a({pt1(0), pt1(1)}), b({pt1(10), pt1(11)});
  auto v = DisorderSample::constant(std::vector<LatticePoint>{pt1(0), pt1(1), pt1(10), pt1(11)}, 0.0);
  auto c = tensor_spectrum_check(a, b, 1.0, v);
  CHECK(c.size == 4);
  CHECK(c.deviation <= 1e-9);
  // reference: dense eigensolve of the assembled two-particle operator
  auto s = spectrum(assemble(product(a, b), 1.0, v)).values;
  Eigen::Vector4d want(-2, 0, 0, 2);
  CHECK((s - want).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("tensor spectrum, random boxes") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Box a(pt1(0), 3), b(pt1(20), 2);
    std::vector<LatticePoint> sites;
    for (int x = -2; x <= 2; ++x) sites.push_back(pt1(x));
    for (int x = 19; x <= 21; ++x) sites.push_back(pt1(x));
    auto v = sample(MarginalDistribution::uniform(-1, 1), seed, sites);
    auto c = tensor_spectrum_check(a, b, 3.0, v);
    CHECK(c.size == 15);
    CHECK(c.deviation <= 1e-9);
  }
}

TEST_CASE("tensor spectrum refuses interacting factors") {
  std::vector<LatticePoint> sites{pt1(-1), pt1(0), pt1(1), pt1(2), pt1(3), pt1(4)};
  auto v = DisorderSample::constant(sites, 0.0);
  CHECK_THROWS_AS(tensor_spectrum_check(Box(pt1(0), 2), Box(pt1(3), 2), 1.0, v, InteractionSpec::step(1.0, 2)),
                  InteractionNonzeroError);
  // a vanishing interaction does not block the identity
  CHECK_NOTHROW(tensor_spectrum_check(Box(pt1(0), 2), Box(pt1(3), 2), 1.0, v, InteractionSpec::step(0.0, 2)));
}

TEST_CASE("two-particle events away from the diagonal") {
  ModelSpec m = strong(10);
  m.N = 2;
  MpEventOptions o;
  o.L0 = 4;
  o.center = LatticePoint({0, 100}, 2, 1);
  auto r = mp_step_events(m, 5, 2, o);
  CHECK(r.L_small == 4);
  CHECK(r.L_large == 8);
  CHECK(r.r_threshold == decomposition_threshold(2, 4, 0));
  CHECK(r.b_separation == 9 * (r.L_small + r.r_threshold));
  CHECK(r.s_events == 0);
  CHECK(r.b_events == 0);
  CHECK(r.neither == 5);
}
