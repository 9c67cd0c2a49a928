#ifndef MSA_GREEN_HPP
#define MSA_GREEN_HPP

// Fixed-energy Green functions G(x, y; E) = (H - E)^{-1}(x, y) on finite
// volumes, the scale function gamma(m, L), and the NS / NR / CNR predicates.

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "msa/hamiltonian.hpp"
#include "msa/lattice.hpp"

namespace msa {

/// gamma(m, L) = m (L + L^{3/4}).
template <typename Scalar>
Scalar gamma(Scalar m, int L) {
  using std::pow;
  const Scalar l = static_cast<Scalar>(L);
  return m * (l + pow(l, Scalar(3) / Scalar(4)));
}

/// Energies closer than this to the spectrum are treated as resonant.
inline constexpr double kResonanceCutoff = 1e-12;

struct ResolventOptions {
  std::size_t dense_cap = kDenseCap;
  /// Relative tolerance of the inertia bisection used above the dense cap.
  double bisection_rtol = 1e-6;
};

/// dist(E, Sigma(H)). Exact (dense eigensolve) within the cap; above it a
/// certified lower bound from LDL^T inertia counts, and `exact` is false.
struct ResonanceMargin {
  double value;
  bool exact;
};
ResonanceMargin resonance_margin(const Hamiltonian& h, double E, const ResolventOptions& opts = {});

/// Number of eigenvalues strictly below sigma, from the inertia of H - sigma.
std::size_t eigenvalue_count_below(const Hamiltonian& h, double sigma);

/// Whether no eigenvalue lies within `threshold` of E.
bool spectral_gap_at_least(const Hamiltonian& h, double E, double threshold,
                           const ResolventOptions& opts = {});

struct GreenColumn {
  LatticePoint source;
  double energy = 0.0;
  Eigen::VectorXd values;       // G(x, source; E) in the region's site order
  double norm_estimate = 0.0;   // ||G(E)|| = 1 / resonance_margin
  double resonance_margin = 0.0;
  bool margin_exact = true;
  double residual = 0.0;        // ||(H - E) g - delta_source||_inf

  double at(const Hamiltonian& h, const LatticePoint& x) const;
};

/// Solves (H - E) g = delta_source. Throws ResonantEnergyError when E is
/// within kResonanceCutoff of the spectrum.
GreenColumn green_column(const Hamiltonian& h, const LatticePoint& source, double E,
                         const ResolventOptions& opts = {});
/// Source at the centre of the operator's cube.
GreenColumn green_column(const Hamiltonian& h, double E, const ResolventOptions& opts = {});

/// Columns G(., s; E) for every source s, from a single factorization of
/// H - E. The caller is responsible for E being non-resonant.
Eigen::MatrixXd green_columns(const Hamiltonian& h, const std::vector<LatticePoint>& sources, double E);

enum class CnrScan { strided, exhaustive };

struct ClassifyOptions {
  double m = 1.0;
  double beta = 0.5;
  /// Scale ell of the complete non-resonance test; sub-cubes of diameter
  /// >= 3 ell are scanned. 0 disables the sub-cube scan (cnr == nr).
  int cnr_radius = 0;
  CnrScan scan = CnrScan::strided;
  ResolventOptions resolvent{};
};

struct Classification {
  bool ns = false;
  bool nr = false;
  bool cnr = false;
  double m = 0.0;
  double beta = 0.0;
  double gamma_value = 0.0;
  double boundary_max = 0.0;  // max over the inner boundary of |G(u, y; E)|
  double margin = 0.0;        // dist(E, Sigma(H))
  bool resonant = false;      // E hit the resolvent cutoff
};

/// Smallest radius r with diameter 2(r - 1) >= 3 ell.
int cnr_min_radius(int ell);

/// Sub-cubes Lambda_r(c) of `box` scanned by the CNR test.
std::vector<Box> cnr_subcubes(const Box& box, int ell, CnrScan scan);

/// E-NR test for a cube of radius L: dist(E, Sigma) >= exp(-L^beta).
bool non_resonant(const Hamiltonian& h, double E, double beta, const ResolventOptions& opts = {});

Classification classify(const Hamiltonian& h, double E, const ClassifyOptions& opts);

/// -log(boundary_max) / (L + L^{3/4}); +inf when the boundary values vanish.
double effective_mass(const Hamiltonian& h, double E, const ResolventOptions& opts = {});

struct GriResult {
  double lhs = 0.0;                // G(u, y; E) in the ambient operator
  double rhs = 0.0;                // sum over edge pairs of G_inner(u, x) G(x', y)
  double residual = 0.0;           // |lhs - rhs|
  double relative_residual = 0.0;  // residual / max(|lhs|, sum of |terms|)
  double inequality_bound = 0.0;   // max |G_inner(u, .)| on the inner boundary * |outer| * max |G(., y)| on the outer boundary
  double slack = 0.0;              // inequality_bound - |lhs|
  std::size_t edge_pairs = 0;
  std::size_t outer_size = 0;
};

/// Evaluates both sides of the geometric resolvent identity for the inner
/// cube `inner` (centre u) inside the ambient operator's region, at target y.
/// Throws ResonantEnergyError (inner() == true) when E is resonant for the
/// inner cube.
GriResult gri_check(const Hamiltonian& ambient, const Box& inner, double E, const LatticePoint& y,
                    const ResolventOptions& opts = {});

}  // namespace msa

#endif  // MSA_GREEN_HPP
