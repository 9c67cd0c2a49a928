#ifndef MSA_DESCENT_HPP
#define MSA_DESCENT_HPP

// Radial descent for (ell, q, S)-subharmonic functions on a cube and the
// deterministic "no singular cluster => non-singular" predicate built on it.

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "msa/errors.hpp"
#include "msa/green.hpp"
#include "msa/hamiltonian.hpp"
#include "msa/lattice.hpp"

namespace msa {

/// A non-negative function on a cube together with the descent parameters.
/// `f` is indexed by the domain's site index.
struct SubharmonicInstance {
  Box domain;
  Eigen::VectorXd f;
  int ell = 1;
  double q = 1.0;
  std::vector<LatticePoint> singular;
  int A = 1;
};

struct SubharmonicCheck {
  bool pass = true;
  std::optional<LatticePoint> violation;  // first failing site in index order
  double value = 0.0;                     // |f| at the violation
  double bound = 0.0;                     // q * neighbourhood max at the violation
};

/// Checks |f(u)| <= q max_{||y-u|| = ell} |f(y)| at every regular u at
/// distance >= ell from the inner boundary, and
/// |f(u)| <= q max_{ell <= ||y-u|| <= A ell - 1} |f(y)| at every u in S.
SubharmonicCheck verify_subharmonic(const SubharmonicInstance& inst);

enum class DescentCase { no_singular, boundary_adjacent, interior };

/// How the singular-set size A enters the exponent [(L - A')/ell] - k.
/// `literal` takes A' = A; `scaled` takes A' = A ell (A counted in units of
/// ell, as the singular set has diameter A ell - 1).
enum class SingularOffset { literal, scaled };

/// [L/ell] - 1, [(L - A')/ell] - 2 or [(L - A')/ell] - 3.
int descent_exponent(int L, int ell, DescentCase kind, int A = 0,
                     SingularOffset offset = SingularOffset::literal);

/// q^descent_exponent(...). Throws DomainError unless L > ell >= 1, q > 0 and
/// the exponent is non-negative.
template <typename Scalar>
Scalar descent_bound(int L, int ell, Scalar q, DescentCase kind, int A = 0,
                     SingularOffset offset = SingularOffset::literal);

struct DescentCheck {
  bool supported = false;
  std::string unsupported_reason;
  DescentCase kind = DescentCase::no_singular;
  int r = -1;                     // annulus index of the interior case
  bool induction_stopped = false; // L - (A + r + 3) ell < 2 ell
  double center_value = 0.0;      // |f(x)|
  double sup = 0.0;               // M(f, domain)
  int exponent = 0;               // scaled exponent, clamped at 0
  double bound = 0.0;             // q^exponent * sup
  bool holds = false;
  int literal_exponent = 0;       // as printed, A' = A
  double literal_bound = 0.0;
  bool literal_holds = false;
};

/// Matches the singular set to one of the three descent cases and compares
/// |f(center)| with q^k M(f). Throws DomainError if the instance is not
/// subharmonic; unsupported geometry is reported, not thrown.
DescentCheck check_descent(const SubharmonicInstance& inst);

template <typename Scalar>
struct QFactors {
  Scalar q_tilde;  // 2d ell^{d-1} e^{-gamma(m, ell)}
  Scalar q;        // 4d^2 (12 ell^2)^{d-1} e^{L^beta} e^{-gamma(m, ell)}
};

template <typename Scalar>
QFactors<Scalar> q_factors(int d, int ell, int L, Scalar m, Scalar beta);

enum class NsReason {
  none,
  resonant,
  not_cnr,
  two_singular,
  q_not_small,
  length_margin,
  subharmonicity_failed,
  unsupported_geometry,
  bound_too_weak,
};

const char* to_string(NsReason reason);

struct NsImplicationOptions {
  double m = 1.0;
  double beta = 0.5;
  int ell = 1;
  int A = 4;
  CnrScan scan = CnrScan::strided;
  ResolventOptions resolvent{};
};

struct NsVerdict {
  bool implied = false;
  NsReason reason = NsReason::none;
  std::string detail;
  std::vector<LatticePoint> singular_centers;
  QFactors<double> factors{0.0, 0.0};
  Classification ambient;
  double norm = 0.0;                 // ||G_Lambda(E)||
  double bound = 0.0;                // largest q^k ||G|| over the boundary targets
  double target = 0.0;               // e^{-gamma(m, L)}
  double log_bound = 0.0;            // the comparison is made in logarithms
  double log_target = 0.0;
  std::optional<DescentCase> kind;
  int exponent = 0;
  bool induction_stopped = false;
  bool decay_checked = false;         // no-singular case only
  bool decay_holds = false;           // boundary_max <= q^{[L/ell]} ||G||
  double decay_rhs = 0.0;
};

/// Classifies every ell-sub-cube of the ambient cube, checks the hypotheses
/// (E-NR / E-CNR, at most one singular cluster, q < 1, length margins, and the
/// resolvent-identity subharmonicity of every boundary column of G), and
/// concludes non-singularity from the descent bound when it is strong enough.
NsVerdict ns_implication(const Hamiltonian& ambient, double E, const NsImplicationOptions& opts);

// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar descent_bound(int L, int ell, Scalar q, DescentCase kind, int A, SingularOffset offset) {
  using std::pow;
  if (!(q > Scalar(0))) throw DomainError("descent_bound: q must be positive");
  return pow(q, static_cast<Scalar>(descent_exponent(L, ell, kind, A, offset)));
}

template <typename Scalar>
QFactors<Scalar> q_factors(int d, int ell, int L, Scalar m, Scalar beta) {
  using std::exp;
  using std::pow;
  if (d < 1 || ell < 1 || L < 1 || !(m > Scalar(0)) || !(beta > Scalar(0)) || !(beta < Scalar(1))) {
    throw DomainError("q_factors: parameters must be positive with beta in (0, 1)");
  }
  const Scalar sd = static_cast<Scalar>(d);
  const Scalar sl = static_cast<Scalar>(ell);
  const Scalar decay = exp(-gamma(m, ell));
  QFactors<Scalar> out;
  out.q_tilde = Scalar(2) * sd * pow(sl, sd - Scalar(1)) * decay;
  out.q = Scalar(4) * sd * sd * pow(Scalar(12) * sl * sl, sd - Scalar(1)) *
          exp(pow(static_cast<Scalar>(L), beta)) * decay;
  // q / q_tilde = 2d (12 ell)^{d-1} e^{L^beta} > 1; only underflow can hide it
  if (out.q_tilde > Scalar(0) && !(out.q > out.q_tilde)) throw Error("q_factors: expected q > q_tilde");
  return out;
}

}  // namespace msa

#endif  // MSA_DESCENT_HPP
