#include "doctest.h"

#include <cmath>

#include "msa/cli.hpp"
#include "msa/descent.hpp"
#include "msa/errors.hpp"

using namespace msa;

namespace {

LatticePoint pt1(int x) { return LatticePoint::single({x}); }

// f(x) = q^{(R - ||x - c||) / ell}: equality in every regular constraint.
SubharmonicInstance geometric(int R, int ell, double q, int d) {
  Box box(LatticePoint::origin(1, d), R);
  SubharmonicInstance inst{box, Eigen::VectorXd(box.site_count()), ell, q, {}, 1};
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    const double r = static_cast<double>(sup_distance(box.site(i), box.center()));
    inst.f(i) = std::pow(q, (R - r) / ell);
  }
  return inst;
}

Hamiltonian free_box(const Box& b) {
  return assemble(b, 1.0, DisorderSample::constant(Region::from_box(b).projected_sites(), 0.0));
}

}  // namespace

TEST_CASE("hand values of the descent bound") {
  CHECK(descent_bound(16, 4, 0.5, DescentCase::no_singular) == 0.125);
  CHECK(descent_bound(20, 4, 0.5, DescentCase::boundary_adjacent, 4) == 0.25);
  CHECK(descent_bound(24, 4, 0.5, DescentCase::interior, 4) == 0.25);
  CHECK(descent_exponent(16, 4, DescentCase::no_singular) == 3);
  CHECK(descent_exponent(20, 4, DescentCase::boundary_adjacent, 4) == 2);
  CHECK(descent_exponent(24, 4, DescentCase::interior, 4) == 2);
  // A counted in units of ell
  CHECK(descent_exponent(60, 4, DescentCase::interior, 4, SingularOffset::scaled) == 8);
}

TEST_CASE("descent bound domain") {
  CHECK_THROWS_AS(descent_bound(4, 4, 0.5, DescentCase::no_singular), DomainError);
  CHECK_THROWS_AS(descent_bound(16, 0, 0.5, DescentCase::no_singular), DomainError);
  CHECK_THROWS_AS(descent_bound(16, 4, 0.0, DescentCase::no_singular), DomainError);
  CHECK_THROWS_AS(descent_bound(8, 4, 0.5, DescentCase::interior, 4), DomainError);
}

TEST_CASE("descent bound is monotone") {
  for (auto kind : {DescentCase::no_singular, DescentCase::boundary_adjacent, DescentCase::interior}) {
    double prev = 2.0;
    for (int L = 20; L < 80; ++L) {
      const double b = descent_bound(L, 4, 0.7, kind, 4);
      CHECK(b <= prev);
      prev = b;
      CHECK(descent_bound(L, 4, 0.6, kind, 4) <= b);
    }
  }
}

TEST_CASE("q factors") {
  auto f = q_factors(1, 8, 22, 1.0, 0.5);
  CHECK(f.q_tilde == doctest::Approx(5.7651390811053343e-06).epsilon(1e-12));
  CHECK(f.q == doctest::Approx(0.0012556293737607256).epsilon(1e-12));
  CHECK(f.q > f.q_tilde);
  for (int d = 1; d <= 3; ++d)
    for (int ell = 1; ell <= 5; ++ell) {
      auto g = q_factors(d, ell, 30, 0.7, 0.3);
      CHECK(g.q > g.q_tilde);
    }
  CHECK_THROWS_AS(q_factors(1, 8, 22, 1.0, 1.0), DomainError);
}

TEST_CASE("subharmonic examples") {
  Box box(pt1(0), 9);
  SubharmonicInstance flat{box, Eigen::VectorXd::Constant(box.site_count(), 2.5), 2, 1.0, {}, 1};
  CHECK(verify_subharmonic(flat).pass);

  CHECK(verify_subharmonic(geometric(12, 3, 0.5, 1)).pass);
  CHECK(verify_subharmonic(geometric(7, 2, 0.3, 2)).pass);

  auto spike = geometric(12, 3, 0.5, 1);
  const auto at = *spike.domain.index_of(pt1(2));
  spike.f(at) = 10.0;
  auto res = verify_subharmonic(spike);
  CHECK_FALSE(res.pass);
  REQUIRE(res.violation.has_value());
  CHECK(*res.violation == pt1(2));
  CHECK(res.value == 10.0);
}

TEST_CASE("singular sites use the annulus") {
  // sites -5..5; regular sites are checked for |u| <= 3 only
  Box box(pt1(0), 6);
  SubharmonicInstance inst{box, Eigen::VectorXd::Constant(box.site_count(), 1.0), 2, 1.0, {pt1(0)}, 3};
  inst.f(*box.index_of(pt1(-5))) = 2.0;
  inst.f(*box.index_of(pt1(5))) = 2.0;
  inst.f(*box.index_of(pt1(0))) = 2.0;
  // the sphere of radius 2 around 0 only sees 1; the annulus 2..5 reaches 2
  CHECK(verify_subharmonic(inst).pass);
  inst.f(*box.index_of(pt1(0))) = 2.5;
  CHECK_FALSE(verify_subharmonic(inst).pass);
}

TEST_CASE("descent on exact cases") {
  Box box(pt1(0), 9);
  SubharmonicInstance flat{box, Eigen::VectorXd::Constant(box.site_count(), 2.5), 2, 1.0, {}, 1};
  auto c = check_descent(flat);
  CHECK(c.supported);
  CHECK(c.kind == DescentCase::no_singular);
  CHECK(c.holds);
  CHECK(c.center_value == c.bound);

  auto g = check_descent(geometric(12, 3, 0.5, 1));
  CHECK(g.holds);
  CHECK(g.exponent == 3);
  // f(0) = q^{12/3}, M = q^{1/3}: ratio q^{11/3} against q^3
  CHECK(g.center_value / g.sup == doctest::Approx(std::pow(0.5, 11.0 / 3.0)));

  auto spike = geometric(12, 3, 0.5, 1);
  spike.f(*spike.domain.index_of(pt1(0))) = 10.0;
  CHECK_THROWS_AS(check_descent(spike), DomainError);
}

TEST_CASE("randomized instances") {
  std::size_t seen[3] = {0, 0, 0};
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto want = static_cast<DescentCase>(s % 3);
    auto inst = random_subharmonic(trial_seed(77, s), want);
    REQUIRE(verify_subharmonic(inst).pass);
    auto c = check_descent(inst);
    REQUIRE(c.supported);
    CHECK(c.kind == want);
    CHECK(c.holds);
    ++seen[static_cast<int>(c.kind)];
  }
  CHECK(seen[0] == 20);
  CHECK(seen[1] == 20);
  CHECK(seen[2] == 20);
}

TEST_CASE("ns implication, free chain") {
  auto h = free_box(Box(pt1(0), 22));
  NsImplicationOptions o;
  o.m = 1.0;
  o.ell = 8;
  o.scan = CnrScan::exhaustive;
  auto v = ns_implication(h, 100.0, o);
  CHECK(v.singular_centers.empty());
  CHECK(v.ambient.nr);
  CHECK(v.decay_checked);
  CHECK(v.decay_holds);
  CHECK(v.ambient.boundary_max <= v.decay_rhs);
  CHECK(v.factors.q == doctest::Approx(0.0012556293737607256).epsilon(1e-12));
  // one descent step is far weaker than e^{-gamma(1, 22)}
  CHECK_FALSE(v.implied);
  CHECK(v.reason == NsReason::bound_too_weak);
  CHECK(v.ambient.ns);
}

TEST_CASE("ns implication, far from the spectrum") {
  auto h = free_box(Box(pt1(0), 22));
  NsImplicationOptions o;
  o.m = 2.0;
  o.beta = 0.1;
  o.ell = 2;
  auto v = ns_implication(h, 1e9, o);
  CHECK(v.implied);
  CHECK(v.kind == DescentCase::no_singular);
  CHECK(v.decay_holds);
  CHECK(v.log_bound <= v.log_target);
  CHECK(classify(h, 1e9, ClassifyOptions{2.0, 0.1}).ns);
}

TEST_CASE("ns implication, resonant ambient") {
  auto h = free_box(Box(pt1(0), 3));
  NsImplicationOptions o;
  o.ell = 1;
  auto v = ns_implication(h, 1e-14, o);
  CHECK_FALSE(v.implied);
  CHECK(v.reason == NsReason::resonant);
  CHECK(std::string(to_string(v.reason)) == "resonant");
}
