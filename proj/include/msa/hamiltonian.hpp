#ifndef MSA_HAMILTONIAN_HPP
#define MSA_HAMILTONIAN_HPP

// Finite-volume Anderson Hamiltonians with Dirichlet truncation:
//
//   H = sum_j ( -Delta^(j) + g V(x_j) ) + U(x),   (Delta f)(x) = sum_{|y-x|_1 = 1} f(y)
//
// so every l1-adjacent pair inside the region carries -1 and the diagonal is
// g sum_j V(x_j) + sum_{j<k} u2(||x_j - x_k||).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <optional>
#include <vector>

#include "msa/disorder.hpp"
#include "msa/lattice.hpp"

namespace msa {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Dense eigensolves are refused above this many sites.
inline constexpr std::size_t kDenseCap = 4096;

/// Finite-range two-body interaction u2(r), r the sup-distance between particles.
class InteractionSpec {
 public:
  InteractionSpec() = default;
  /// u2(r) = table[r] for r <= r0 = table.size() - 1, zero beyond.
  explicit InteractionSpec(std::vector<double> table);
  /// u2(r) = u0 * 1[r <= r0].
  static InteractionSpec step(double u0, int r0);

  int range() const noexcept { return static_cast<int>(table_.size()) - 1; }
  double operator()(long r) const noexcept;
  double bound() const noexcept;
  bool vanishes() const noexcept;
  const std::vector<double>& table() const noexcept { return table_; }

 private:
  std::vector<double> table_;
};

/// U(x) = sum_{j<k} u2(||x_j - x_k||).
double interaction_energy(const InteractionSpec& u, const LatticePoint& x);

/// Immutable assembled operator over a region. `box()` is set when the region
/// is a full cube; box-specific operations (Green columns, classification)
/// require it.
class Hamiltonian {
 public:
  Hamiltonian(Region region, std::optional<Box> box, double coupling, SparseMatrix matrix);

  const Region& region() const noexcept { return region_; }
  const std::optional<Box>& box() const noexcept { return box_; }
  /// Throws DomainError when the operator is not defined on a cube.
  const Box& cube() const;
  double coupling() const noexcept { return coupling_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return region_.size(); }

  double entry(const LatticePoint& x, const LatticePoint& y) const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }

  /// Principal submatrix on `sub` (Dirichlet restriction). Every site of
  /// `sub` must belong to the region.
  Hamiltonian restricted(const Region& sub, std::optional<Box> sub_box = std::nullopt) const;
  Hamiltonian restricted(const Box& sub) const;

 private:
  Region region_;
  std::optional<Box> box_;
  double coupling_;
  SparseMatrix matrix_;
};

Hamiltonian assemble(const Region& region, double coupling, const DisorderSample& potential,
                     const std::optional<InteractionSpec>& interaction = std::nullopt);
Hamiltonian assemble(const Box& box, double coupling, const DisorderSample& potential,
                     const std::optional<InteractionSpec>& interaction = std::nullopt);

/// H = (H_inner (+) H_complement) + coupling, all in the ambient site order.
struct DirichletSplit {
  Hamiltonian inner;
  Hamiltonian complement;
  SparseMatrix coupling;        // entries -1 on (x, x') and (x', x) for every edge pair
  std::vector<EdgePair> edges;  // edge pairs of the inner box inside the ambient region
};

DirichletSplit dirichlet_split(const Hamiltonian& h, const Box& inner);

/// Embeds the three split pieces back into the ambient indexing and sums them.
SparseMatrix reassemble(const Hamiltonian& ambient, const DirichletSplit& split);

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, empty unless requested
};

/// All eigenvalues (and optionally orthonormal eigenvectors) by dense
/// symmetric eigensolve. Throws CapacityError above `cap` sites.
Spectrum spectrum(const Hamiltonian& h, bool with_vectors = false, std::size_t cap = kDenseCap);

/// Coordinate-format dump: one "row col value" line per stored entry.
void write_coo(std::ostream& os, const Hamiltonian& h);

}  // namespace msa

#endif  // MSA_HAMILTONIAN_HPP
