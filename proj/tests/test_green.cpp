#include "doctest.h"

#include <cmath>

#include "msa/errors.hpp"
#include "msa/green.hpp"

using namespace msa;

namespace {

LatticePoint pt1(int x) { return LatticePoint::single({x}); }

Hamiltonian free_box(const Box& b) {
  return assemble(b, 1.0, DisorderSample::constant(Region::from_box(b).projected_sites(), 0.0));
}

Hamiltonian random_box(const Box& b, double g, std::uint64_t seed) {
  return assemble(b, g, sample(MarginalDistribution::uniform(-1, 1), seed, Region::from_box(b).projected_sites()));
}

// Dense inverse of H - E, the reference for every Green-function value.
Eigen::MatrixXd dense_green(const Hamiltonian& h, double E) {
  Eigen::MatrixXd m = h.dense() - E * Eigen::MatrixXd::Identity(h.size(), h.size());
  return m.inverse();
}

}  // namespace

TEST_CASE("gamma") {
  CHECK(gamma(1.0, 16) == 24.0);
  CHECK(gamma(0.5, 16) == 12.0);
  CHECK(gamma(1.0, 1) == 2.0);
  CHECK(gamma(1.0, 8) == doctest::Approx(12.756828460010883).epsilon(1e-15));
}

TEST_CASE("single-site green function") {
  DisorderSample v;
  v.set(pt1(0), 0.5);
  auto h = assemble(Box(pt1(0), 1), 2.0, v);
  auto col = green_column(h, 0.25);
  CHECK(col.values(0) == doctest::Approx(1.0 / (2.0 * 0.5 - 0.25)));
  CHECK(col.resonance_margin == doctest::Approx(0.75));
}

TEST_CASE("three-site free chain at E = 5") {
  auto h = free_box(Box(pt1(0), 2));
  auto col = green_column(h, 5.0);
  Eigen::Vector3d want(1.0 / 23, -5.0 / 23, 1.0 / 23);
  CHECK((col.values - want).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(col.residual <= 1e-12);
}

TEST_CASE("columns agree with a dense inverse") {
  Box b(LatticePoint::single({0, 0}), 4);
  auto h = random_box(b, 3.0, 21);
  const double E = 0.37;
  Eigen::MatrixXd G = dense_green(h, E);
  std::vector<LatticePoint> sources{b.center(), LatticePoint::single({3, -3}), LatticePoint::single({1, 2})};
  Eigen::MatrixXd cols = green_columns(h, sources, E);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    auto j = *h.region().index_of(sources[k]);
    CHECK((cols.col(k) - G.col(j)).cwiseAbs().maxCoeff() < 1e-12);
    auto one = green_column(h, sources[k], E);
    CHECK((one.values - G.col(j)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("decay far from the spectrum") {
  auto h = free_box(Box(pt1(0), 8));
  auto col = green_column(h, 100.0);
  double prev = std::abs(col.at(h, pt1(0)));
  for (int y = 1; y <= 7; ++y) {
    double cur = std::abs(col.at(h, pt1(y)));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("resonant energies") {
  auto h = free_box(Box(pt1(0), 3));
  // the 5-site free chain has eigenvalue 0
  CHECK_THROWS_AS(green_column(h, 1e-14), ResonantEnergyError);
  ClassifyOptions o;
  auto c = classify(h, 1e-14, o);
  CHECK(c.resonant);
  CHECK_FALSE(c.ns);
  CHECK_FALSE(c.nr);
  CHECK_FALSE(c.cnr);
  CHECK(resonance_margin(h, 1e-14).value < kResonanceCutoff);
}

TEST_CASE("single site classification") {
  DisorderSample v;
  v.set(pt1(0), 0.5);
  auto h = assemble(Box(pt1(0), 1), 1.0, v);
  ClassifyOptions o;
  o.m = 1.0;
  auto c = classify(h, -0.5, o);
  CHECK(c.boundary_max == doctest::Approx(1.0));
  CHECK_FALSE(c.ns);
  CHECK(c.nr);
}

TEST_CASE("free chain at E = 100 is non-singular") {
  auto h = free_box(Box(pt1(0), 8));
  ClassifyOptions o;
  o.m = 1.0;
  auto c = classify(h, 100.0, o);
  CHECK(c.ns);
  CHECK(c.nr);
  CHECK(c.boundary_max == doctest::Approx(1.0008004402080908e-16).epsilon(1e-10));
  Eigen::MatrixXd G = dense_green(h, 100.0);
  CHECK(c.boundary_max == doctest::Approx(std::max(std::abs(G(7, 0)), std::abs(G(7, 14)))).epsilon(1e-10));
  CHECK(c.boundary_max < std::exp(-gamma(1.0, 8)));
  CHECK(c.margin == doctest::Approx(98.0).epsilon(1e-3));
}

TEST_CASE("non-resonance threshold") {
  auto h = free_box(Box(pt1(0), 3));
  // margin to eigenvalue 0 is 0.1; threshold exp(-sqrt(3)) ~ 0.177
  CHECK_FALSE(non_resonant(h, 0.1, 0.5));
  CHECK(non_resonant(h, 0.1, 0.9));
  CHECK(spectral_gap_at_least(h, 0.1, 0.09));
  CHECK_FALSE(spectral_gap_at_least(h, 0.1, 0.11));
  CHECK(eigenvalue_count_below(h, 0.5) == 3);
}

TEST_CASE("cnr scan") {
  Box b(pt1(0), 10);
  CHECK(cnr_min_radius(2) == 4);
  for (const auto& sub : cnr_subcubes(b, 2, CnrScan::exhaustive)) {
    CHECK(b.contains(sub));
    CHECK(sub.diameter() >= 6);
  }
  CHECK(cnr_subcubes(b, 2, CnrScan::strided).size() <= cnr_subcubes(b, 2, CnrScan::exhaustive).size());
}

TEST_CASE("resolvent identity, free chain") {
  auto h = free_box(Box(pt1(0), 6));
  auto r = gri_check(h, Box(pt1(0), 3), 5.0, pt1(4));
  CHECK(r.edge_pairs == 2);
  CHECK(r.relative_residual <= 1e-10);
  CHECK(r.slack >= 0.0);
  Eigen::MatrixXd G = dense_green(h, 5.0);
  CHECK(r.lhs == doctest::Approx(G(5, 9)).epsilon(1e-12));
}

TEST_CASE("resolvent identity, random disorder") {
  auto h = random_box(Box(pt1(0), 6), 2.0, 17);
  Eigen::MatrixXd G = dense_green(h, 0.3);
  for (int y : {-5, -4, -3, 3, 4, 5}) {
    auto r = gri_check(h, Box(pt1(0), 3), 0.3, pt1(y));
    CHECK(r.relative_residual <= 1e-10);
    CHECK(r.slack >= -1e-12);
    CHECK(r.lhs == doctest::Approx(G(5, y + 5)).epsilon(1e-10));
  }
}

TEST_CASE("effective mass") {
  DisorderSample v;
  v.set(pt1(0), 0.0);
  auto h = assemble(Box(pt1(0), 1), 1.0, v);
  // |G(u, u)| = e^{-2}
  CHECK(effective_mass(h, -std::exp(2.0)) == doctest::Approx(1.0).epsilon(1e-14));
  auto chain = free_box(Box(pt1(0), 8));
  const double m = effective_mass(chain, 100.0);
  CHECK(m == doctest::Approx(2.8879091290882366).epsilon(1e-10));
  ClassifyOptions o;
  o.m = m * 0.999;
  CHECK(classify(chain, 100.0, o).ns);
}
