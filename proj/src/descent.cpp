#include "msa/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "msa/errors.hpp"

namespace msa {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long raw_exponent(int L, int ell, DescentCase kind, int A, SingularOffset offset) {
  const long shift = offset == SingularOffset::scaled ? static_cast<long>(A) * ell : A;
  switch (kind) {
    case DescentCase::no_singular:
      return floor_div(L, ell) - 1;
    case DescentCase::boundary_adjacent:
      return floor_div(L - shift, ell) - 2;
    case DescentCase::interior:
      return floor_div(L - shift, ell) - 3;
  }
  return 0;
}

double value_at(const SubharmonicInstance& inst, const LatticePoint& y) {
  return std::abs(inst.f[static_cast<Eigen::Index>(*inst.domain.index_of(y))]);
}

// max |f(y)| over lo <= ||y - u|| <= hi, y in the domain; 0 when empty
double ring_max(const SubharmonicInstance& inst, const LatticePoint& u, long lo, long hi) {
  double best = 0.0;
  const Box around(u, static_cast<int>(hi) + 1);
  for (std::size_t i = 0; i < around.site_count(); ++i) {
    const auto y = around.site(i);
    if (sup_distance(y, u) < lo || !inst.domain.contains(y)) continue;
    best = std::max(best, value_at(inst, y));
  }
  return best;
}

// value <= q^k sup, compared in logarithms so that q^k may underflow; the
// 1e-12 slack absorbs the difference between pow and a k-fold product.
bool within_power_bound(double value, double q, int k, double sup) {
  if (value == 0.0) return true;
  if (sup == 0.0) return false;
  return std::log(value) <= k * std::log(q) + std::log(sup) + 1e-12;
}

}  // namespace

SubharmonicCheck verify_subharmonic(const SubharmonicInstance& inst) {
  if (inst.f.size() != static_cast<Eigen::Index>(inst.domain.site_count())) {
    throw DomainError("verify_subharmonic: f does not match the domain");
  }
  if (inst.ell < 1) throw DomainError("verify_subharmonic: ell must be positive");
  std::unordered_set<LatticePoint, LatticePointHash> singular(inst.singular.begin(), inst.singular.end());
  const auto& c = inst.domain.center();
  const long L = inst.domain.radius();

  SubharmonicCheck out;
  for (std::size_t i = 0; i < inst.domain.site_count(); ++i) {
    const auto u = inst.domain.site(i);
    double nb;
    if (singular.contains(u)) {
      nb = ring_max(inst, u, inst.ell, static_cast<long>(inst.A) * inst.ell - 1);
    } else if (L - 1 - sup_distance(u, c) >= inst.ell) {
      nb = ring_max(inst, u, inst.ell, inst.ell);
    } else {
      continue;
    }
    const double v = std::abs(inst.f[static_cast<Eigen::Index>(i)]);
    const double bound = inst.q * nb;
    if (v > bound) {
      out.pass = false;
      out.violation = u;
      out.value = v;
      out.bound = bound;
      return out;
    }
  }
  return out;
}

int descent_exponent(int L, int ell, DescentCase kind, int A, SingularOffset offset) {
  if (ell < 1 || L <= ell) throw DomainError("descent_exponent: need L > ell >= 1");
  if (A < 0) throw DomainError("descent_exponent: A must be non-negative");
  const long k = raw_exponent(L, ell, kind, A, offset);
  if (k < 0) {
    throw DomainError("descent_exponent: exponent " + std::to_string(k) + " is negative for L = " +
                      std::to_string(L) + ", ell = " + std::to_string(ell));
  }
  return static_cast<int>(k);
}

DescentCheck check_descent(const SubharmonicInstance& inst) {
  const auto sc = verify_subharmonic(inst);
  if (!sc.pass) throw DomainError("check_descent: instance is not subharmonic");

  const int L = inst.domain.radius();
  const int ell = inst.ell;
  const int A = inst.A;
  const auto& x = inst.domain.center();

  DescentCheck out;
  out.center_value = value_at(inst, x);
  out.sup = inst.f.size() > 0 ? inst.f.cwiseAbs().maxCoeff() : 0.0;

  for (const auto& s : inst.singular) {
    if (!inst.domain.contains(s)) throw ContainmentError("check_descent: singular site outside the domain");
  }

  if (inst.singular.empty()) {
    out.kind = DescentCase::no_singular;
  } else {
    long diam = 0;
    for (std::size_t a = 0; a < inst.singular.size(); ++a) {
      for (std::size_t b = a + 1; b < inst.singular.size(); ++b) {
        diam = std::max(diam, sup_distance(inst.singular[a], inst.singular[b]));
      }
    }
    if (diam > static_cast<long>(A) * ell - 1) {
      out.unsupported_reason = "singular set diameter " + std::to_string(diam) + " exceeds A ell - 1";
      return out;
    }
    const long collar = static_cast<long>(L) - static_cast<long>(A + 1) * ell;
    const bool in_collar = std::all_of(inst.singular.begin(), inst.singular.end(),
                                       [&](const LatticePoint& s) { return sup_distance(s, x) >= collar; });
    if (in_collar) {
      out.kind = DescentCase::boundary_adjacent;
    } else {
      long dist = std::numeric_limits<long>::max();
      for (const auto& s : inst.singular) dist = std::min(dist, L - 1 - sup_distance(s, x));
      const long r = dist / ell - 2;
      if (r < 0) {
        out.unsupported_reason = "singular set straddles the boundary collar";
        return out;
      }
      const long hole = static_cast<long>(L) - (r + A + 3) * ell;
      const bool outside = std::all_of(inst.singular.begin(), inst.singular.end(),
                                       [&](const LatticePoint& s) { return sup_distance(s, x) >= hole; });
      if (!outside) {
        out.unsupported_reason = "singular set reaches the inner cube of the interior case";
        return out;
      }
      out.kind = DescentCase::interior;
      out.r = static_cast<int>(r);
      out.induction_stopped = hole < 2L * ell;
    }
  }

  out.supported = true;
  out.exponent = static_cast<int>(std::max(0L, raw_exponent(L, ell, out.kind, A, SingularOffset::scaled)));
  out.literal_exponent = static_cast<int>(std::max(0L, raw_exponent(L, ell, out.kind, A, SingularOffset::literal)));
  out.bound = std::pow(inst.q, out.exponent) * out.sup;
  out.literal_bound = std::pow(inst.q, out.literal_exponent) * out.sup;
  out.holds = within_power_bound(out.center_value, inst.q, out.exponent, out.sup);
  out.literal_holds = within_power_bound(out.center_value, inst.q, out.literal_exponent, out.sup);
  return out;
}

const char* to_string(NsReason reason) {
  switch (reason) {
    case NsReason::none: return "none";
    case NsReason::resonant: return "resonant";
    case NsReason::not_cnr: return "not_cnr";
    case NsReason::two_singular: return "two_singular";
    case NsReason::q_not_small: return "q_not_small";
    case NsReason::length_margin: return "length_margin";
    case NsReason::subharmonicity_failed: return "subharmonicity_failed";
    case NsReason::unsupported_geometry: return "unsupported_geometry";
    case NsReason::bound_too_weak: return "bound_too_weak";
  }
  return "unknown";
}

NsVerdict ns_implication(const Hamiltonian& ambient, double E, const NsImplicationOptions& opts) {
  const Box& box = ambient.cube();
  const int L = box.radius();
  const int ell = opts.ell;
  if (ell < 1 || ell >= L) throw DomainError("ns_implication: need 1 <= ell < L");
  if (opts.A < 2) throw DomainError("ns_implication: A must be at least 2");
  const int D = box.particles() * box.dim();

  NsVerdict v;
  v.factors = q_factors<double>(D, ell, L, opts.m, opts.beta);
  v.log_target = -gamma(opts.m, L);
  v.target = std::exp(v.log_target);

  ClassifyOptions co;
  co.m = opts.m;
  co.beta = opts.beta;
  co.cnr_radius = ell;
  co.scan = opts.scan;
  co.resolvent = opts.resolvent;
  v.ambient = classify(ambient, E, co);
  auto fail = [&](NsReason r, std::string detail) {
    v.implied = false;
    v.reason = r;
    v.detail = std::move(detail);
    return v;
  };
  if (v.ambient.resonant) return fail(NsReason::resonant, "E is resonant for the ambient cube");
  if (!v.ambient.nr) return fail(NsReason::not_cnr, "ambient cube is not E-NR");
  v.norm = 1.0 / v.ambient.margin;
  v.log_bound = -std::numeric_limits<double>::infinity();

  ClassifyOptions sub;
  sub.m = opts.m;
  sub.beta = opts.beta;
  sub.resolvent = opts.resolvent;
  const Box centers(box.center(), L - ell + 1);
  for (std::size_t i = 0; i < centers.site_count(); ++i) {
    const auto c = centers.site(i);
    if (!classify(ambient.restricted(Box(c, ell)), E, sub).ns) v.singular_centers.push_back(c);
  }
  const auto& S = v.singular_centers;
  for (std::size_t a = 0; a < S.size(); ++a) {
    for (std::size_t b = a + 1; b < S.size(); ++b) {
      if (!boxes_overlap(Box(S[a], ell), Box(S[b], ell))) {
        return fail(NsReason::two_singular, "two disjoint singular sub-cubes");
      }
    }
  }
  if (!S.empty() && !v.ambient.cnr) return fail(NsReason::not_cnr, "ambient cube is not E-CNR");
  if (!(v.factors.q < 1.0)) return fail(NsReason::q_not_small, "q = " + std::to_string(v.factors.q));
  if (!S.empty() && L <= (opts.A + 3) * ell) return fail(NsReason::length_margin, "L <= (A + 3) ell");

  if (S.empty()) {
    v.decay_checked = true;
    v.decay_rhs = std::pow(v.factors.q, L / ell) * v.norm;
    v.decay_holds = v.ambient.boundary_max <= v.decay_rhs;
  }

  const auto targets = inner_boundary(box);
  const Eigen::MatrixXd cols = green_columns(ambient, targets, E);
  std::vector<Eigen::Index> order(box.site_count());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<Eigen::Index>(*ambient.region().index_of(box.site(i)));
  }

  SubharmonicInstance inst{box, Eigen::VectorXd(static_cast<Eigen::Index>(order.size())), ell,
                           v.factors.q, S, opts.A};
  for (std::size_t k = 0; k < targets.size(); ++k) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      inst.f[static_cast<Eigen::Index>(i)] = std::abs(cols(order[i], static_cast<Eigen::Index>(k)));
    }
    if (!verify_subharmonic(inst).pass) {
      return fail(NsReason::subharmonicity_failed, "boundary column " + std::to_string(k) + " is not subharmonic");
    }
    const auto dc = check_descent(inst);
    if (!dc.supported) return fail(NsReason::unsupported_geometry, dc.unsupported_reason);
    v.kind = dc.kind;
    v.exponent = dc.exponent;
    v.induction_stopped = dc.induction_stopped;
    v.log_bound = std::max(v.log_bound, dc.exponent * std::log(v.factors.q) + std::log(v.norm));
  }
  v.bound = std::exp(v.log_bound);
  if (!(v.log_bound <= v.log_target)) return fail(NsReason::bound_too_weak, "descent bound exceeds e^{-gamma(m, L)}");
  v.implied = true;
  v.reason = NsReason::none;
  return v;
}

}  // namespace msa
