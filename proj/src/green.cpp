#include "msa/green.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msa/errors.hpp"

namespace msa {

namespace {

SparseMatrix shifted(const Hamiltonian& h, double sigma) {
  const auto n = static_cast<Eigen::Index>(h.size());
  SparseMatrix id(n, n);
  id.setIdentity();
  SparseMatrix out = h.matrix() - sigma * id;
  out.makeCompressed();
  return out;
}

double gershgorin_radius(const Hamiltonian& h) {
  const SparseMatrix& m = h.matrix();
  double r = 0.0;
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) sum += std::abs(it.value());
    r = std::max(r, sum);
  }
  return r;
}

}  // namespace

std::size_t eigenvalue_count_below(const Hamiltonian& h, double sigma) {
  // Sylvester: P (H - sigma) P^T = L D L^T is congruent to H - sigma.
  // A zero pivot means sigma sits on (or numerically at) an eigenvalue; nudge it.
  double s = sigma;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(shifted(h, s));
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd d = ldlt.vectorD();
      if ((d.array() != 0.0).all()) {
        return static_cast<std::size_t>((d.array() < 0.0).count());
      }
    }
    s = sigma + std::ldexp(std::max(1.0, std::abs(sigma)), -40 + attempt);
  }
  throw Error("inertia count failed: singular factorization near sigma = " + std::to_string(sigma));
}

bool spectral_gap_at_least(const Hamiltonian& h, double E, double threshold,
                           const ResolventOptions& opts) {
  if (h.size() <= opts.dense_cap) {
    return resonance_margin(h, E, opts).value >= threshold;
  }
  return eigenvalue_count_below(h, E - threshold) == eigenvalue_count_below(h, E + threshold);
}

ResonanceMargin resonance_margin(const Hamiltonian& h, double E, const ResolventOptions& opts) {
  if (h.size() == 0) return {std::numeric_limits<double>::infinity(), true};
  if (h.size() <= opts.dense_cap) {
    const auto sp = spectrum(h, false, opts.dense_cap);
    return {(sp.values.array() - E).abs().minCoeff(), true};
  }
  // Bisection on delta: [E - delta, E + delta] is eigenvalue-free iff the
  // counts below both ends agree. `lo` is always a certified gap.
  double lo = 0.0;
  double hi = gershgorin_radius(h) + std::abs(E) + 1.0;
  if (eigenvalue_count_below(h, E - hi) == eigenvalue_count_below(h, E + hi)) return {hi, false};
  const double floor = kResonanceCutoff;
  if (eigenvalue_count_below(h, E - floor) != eigenvalue_count_below(h, E + floor)) return {0.0, false};
  lo = floor;
  while (hi - lo > opts.bisection_rtol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (eigenvalue_count_below(h, E - mid) == eigenvalue_count_below(h, E + mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, false};
}

double GreenColumn::at(const Hamiltonian& h, const LatticePoint& x) const {
  auto i = h.region().index_of(x);
  if (!i) throw ContainmentError("Green function evaluated outside the operator's region");
  return values[static_cast<Eigen::Index>(*i)];
}

GreenColumn green_column(const Hamiltonian& h, const LatticePoint& source, double E,
                         const ResolventOptions& opts) {
  auto src = h.region().index_of(source);
  if (!src) throw ContainmentError("green_column: source outside the operator's region");

  const auto margin = resonance_margin(h, E, opts);
  if (!(margin.value > kResonanceCutoff)) {
    throw ResonantEnergyError("energy " + std::to_string(E) + " is resonant (margin " +
                                  std::to_string(margin.value) + ")",
                              margin.value);
  }

  const SparseMatrix a = shifted(h, E);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw ResonantEnergyError("sparse factorization of H - E failed", margin.value);
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  rhs[static_cast<Eigen::Index>(*src)] = 1.0;

  GreenColumn out;
  out.source = source;
  out.energy = E;
  out.values = lu.solve(rhs);
  out.resonance_margin = margin.value;
  out.margin_exact = margin.exact;
  out.norm_estimate = 1.0 / margin.value;
  out.residual = (a * out.values - rhs).lpNorm<Eigen::Infinity>();
  return out;
}

GreenColumn green_column(const Hamiltonian& h, double E, const ResolventOptions& opts) {
  return green_column(h, h.cube().center(), E, opts);
}

Eigen::MatrixXd green_columns(const Hamiltonian& h, const std::vector<LatticePoint>& sources, double E) {
  const SparseMatrix a = shifted(h, E);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw ResonantEnergyError("sparse factorization of H - E failed", 0.0);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(a.rows(), static_cast<Eigen::Index>(sources.size()));
  for (std::size_t k = 0; k < sources.size(); ++k) {
    auto i = h.region().index_of(sources[k]);
    if (!i) throw ContainmentError("green_columns: source outside the operator's region");
    rhs(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return lu.solve(rhs);
}

// ---------------------------------------------------------------------------

int cnr_min_radius(int ell) { return (3 * ell + 1) / 2 + 1; }

std::vector<Box> cnr_subcubes(const Box& box, int ell, CnrScan scan) {
  std::vector<Box> out;
  if (ell <= 0) return out;
  const int L = box.radius();
  const int stride = scan == CnrScan::exhaustive ? 1 : std::max(1, ell);
  for (int r = cnr_min_radius(ell); r <= L; ++r) {
    const int reach = L - r;  // ||c - u|| <= L - r keeps Lambda_r(c) inside
    const int steps = reach / stride;
    const Box offsets(LatticePoint::origin(box.particles(), box.dim()), steps + 1);
    for (std::size_t i = 0; i < offsets.site_count(); ++i) {
      const auto o = offsets.site(i);
      std::vector<int> c(box.center().coords().begin(), box.center().coords().end());
      for (std::size_t k = 0; k < c.size(); ++k) c[k] += stride * o[k];
      out.emplace_back(LatticePoint(std::move(c), box.particles(), box.dim()), r);
    }
  }
  return out;
}

bool non_resonant(const Hamiltonian& h, double E, double beta, const ResolventOptions& opts) {
  const double threshold = std::exp(-std::pow(static_cast<double>(h.cube().radius()), beta));
  return spectral_gap_at_least(h, E, threshold, opts);
}

Classification classify(const Hamiltonian& h, double E, const ClassifyOptions& opts) {
  const Box& box = h.cube();
  const int L = box.radius();
  Classification c;
  c.m = opts.m;
  c.beta = opts.beta;
  c.gamma_value = gamma(opts.m, L);

  GreenColumn g;
  try {
    g = green_column(h, E, opts.resolvent);
  } catch (const ResonantEnergyError& e) {
    c.resonant = true;
    c.margin = e.margin();
    c.boundary_max = std::numeric_limits<double>::infinity();
    return c;
  }
  c.margin = g.resonance_margin;

  double bmax = 0.0;
  for (const auto& y : inner_boundary(box)) bmax = std::max(bmax, std::abs(g.at(h, y)));
  c.boundary_max = bmax;
  c.ns = bmax <= std::exp(-c.gamma_value);

  c.nr = g.resonance_margin >= std::exp(-std::pow(static_cast<double>(L), opts.beta));
  c.cnr = c.nr;
  if (c.nr && opts.cnr_radius > 0) {
    for (const auto& sub : cnr_subcubes(box, opts.cnr_radius, opts.scan)) {
      if (sub == box) continue;
      if (!non_resonant(h.restricted(sub), E, opts.beta, opts.resolvent)) {
        c.cnr = false;
        break;
      }
    }
  }
  return c;
}

double effective_mass(const Hamiltonian& h, double E, const ResolventOptions& opts) {
  const Box& box = h.cube();
  const auto g = green_column(h, E, opts);
  double bmax = 0.0;
  for (const auto& y : inner_boundary(box)) bmax = std::max(bmax, std::abs(g.at(h, y)));
  if (bmax == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(bmax) / gamma(1.0, box.radius());
}

// ---------------------------------------------------------------------------

GriResult gri_check(const Hamiltonian& ambient, const Box& inner, double E, const LatticePoint& y,
                    const ResolventOptions& opts) {
  const Region& region = ambient.region();
  if (!region.contains(y)) throw ContainmentError("gri_check: target outside the ambient region");
  if (inner.contains(y)) throw DomainError("gri_check: target must lie outside the inner cube");
  const auto split = dirichlet_split(ambient, inner);

  GreenColumn g_in;
  try {
    g_in = green_column(split.inner, inner.center(), E, opts);
  } catch (const ResonantEnergyError& e) {
    throw ResonantEnergyError("gri_check: energy resonant for the inner cube", e.margin(), true);
  }
  // G symmetric: the column with source y holds G(x', y) for every x'.
  const auto g_y = green_column(ambient, y, E, opts);

  GriResult out;
  out.lhs = g_y.at(ambient, inner.center());
  double abs_terms = 0.0;
  for (const auto& e : split.edges) {
    const double term = g_in.at(split.inner, e.inner) * g_y.at(ambient, e.outer);
    out.rhs += term;
    abs_terms += std::abs(term);
  }
  out.edge_pairs = split.edges.size();
  out.residual = std::abs(out.lhs - out.rhs);
  const double scale = std::max(std::abs(out.lhs), abs_terms);
  out.relative_residual = scale > 0.0 ? out.residual / scale : out.residual;

  double inner_max = 0.0;
  for (const auto& x : inner_boundary(inner)) inner_max = std::max(inner_max, std::abs(g_in.at(split.inner, x)));
  double outer_max = 0.0;
  const Box shell(inner.center(), inner.radius() + 1);
  for (std::size_t i = 0; i < shell.site_count(); ++i) {
    const auto x = shell.site(i);
    if (inner.contains(x) || !region.contains(x)) continue;
    ++out.outer_size;
    outer_max = std::max(outer_max, std::abs(g_y.at(ambient, x)));
  }
  out.inequality_bound = inner_max * static_cast<double>(out.outer_size) * outer_max;
  out.slack = out.inequality_bound - std::abs(out.lhs);
  return out;
}

}  // namespace msa
