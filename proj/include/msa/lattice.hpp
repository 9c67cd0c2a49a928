#ifndef MSA_LATTICE_HPP
#define MSA_LATTICE_HPP

// Discrete geometry on Z^{Nd}: points, cubic boxes, arbitrary finite regions,
// boundaries, the diagonal and decomposability of N-particle boxes.
//
// Box geometry (membership, diameters, distances) is measured in the sup-norm.
// Adjacency (edge pairs, the lattice Laplacian) is l1-distance one, i.e. 2Nd
// nearest neighbours per site.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace msa {

/// A point x = (x_1, ..., x_N) of Z^{Nd}; coordinates of particle j occupy
/// the slice [j*d, (j+1)*d).
class LatticePoint {
 public:
  LatticePoint() = default;
  LatticePoint(std::vector<int> coords, int particles, int dim);

  /// Single-particle convenience constructor (N = 1, d = coords.size()).
  static LatticePoint single(std::vector<int> coords);
  static LatticePoint origin(int particles, int dim);

  int particles() const noexcept { return particles_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size(); }
  std::span<const int> coords() const noexcept { return coords_; }
  int operator[](std::size_t k) const { return coords_[k]; }

  /// Position of particle j (0-based) as a single-particle point of Z^d.
  LatticePoint projection(int j) const;

  /// Point shifted by `delta` along axis k.
  LatticePoint shifted(std::size_t axis, int delta) const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint& a, const LatticePoint& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  std::vector<int> coords_;
  int particles_ = 1;
  int dim_ = 0;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

/// Concatenation (u', u'') of an n'-particle and an n''-particle point.
LatticePoint concat(const LatticePoint& a, const LatticePoint& b);

long sup_distance(const LatticePoint& a, const LatticePoint& b);
long l1_distance(const LatticePoint& a, const LatticePoint& b);

/// The cube Lambda_r(u) = { x : ||x - u|| <= r - 1 } in Z^{Nd}; side 2r - 1.
///
/// Sites are indexed in lexicographic order of their coordinates (axis 0 most
/// significant), so `site(i)` is increasing in i.
class Box {
 public:
  Box(LatticePoint center, int radius);

  const LatticePoint& center() const noexcept { return center_; }
  int radius() const noexcept { return radius_; }
  int particles() const noexcept { return center_.particles(); }
  int dim() const noexcept { return center_.dim(); }
  int side() const noexcept { return 2 * radius_ - 1; }
  /// Sup-norm diameter 2(r - 1).
  long diameter() const noexcept { return 2L * (radius_ - 1); }
  std::size_t site_count() const noexcept { return count_; }

  bool contains(const LatticePoint& p) const;
  bool contains(const Box& other) const;

  LatticePoint site(std::size_t index) const;
  std::optional<std::size_t> index_of(const LatticePoint& p) const;

  /// Sup-distance from p to the nearest site of the box (0 when inside).
  long distance_to(const LatticePoint& p) const;

  /// The single-particle cube Pi_j Lambda, 0-based j.
  Box projection(int j) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  LatticePoint center_;
  int radius_;
  std::size_t count_;
};

/// Cartesian product of two boxes of equal radius (an n'+n'' particle cube).
Box product(const Box& a, const Box& b);

bool boxes_overlap(const Box& a, const Box& b);

/// A finite ordered set of sites with O(1) index lookup. Operators and Green
/// functions are indexed by the region's site order.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<LatticePoint> sites);
  static Region from_box(const Box& box);

  std::size_t size() const noexcept { return sites_.size(); }
  bool empty() const noexcept { return sites_.empty(); }
  const LatticePoint& site(std::size_t i) const { return sites_[i]; }
  const std::vector<LatticePoint>& sites() const noexcept { return sites_; }
  std::optional<std::size_t> index_of(const LatticePoint& p) const;
  bool contains(const LatticePoint& p) const { return index_of(p).has_value(); }

  int particles() const noexcept { return particles_; }
  int dim() const noexcept { return dim_; }

  /// Sites of this region that are not in `box`, order preserved.
  Region minus(const Box& box) const;

  /// Sorted, duplicate-free single-particle sites over every projection.
  std::vector<LatticePoint> projected_sites() const;

 private:
  std::vector<LatticePoint> sites_;
  std::unordered_map<LatticePoint, std::size_t, LatticePointHash> index_;
  int particles_ = 1;
  int dim_ = 0;
};

/// Product region {(x', x'') : x' in a, x'' in b}, lexicographic in (x', x'').
Region product(const Region& a, const Region& b);

struct EdgePair {
  LatticePoint inner;  // in the box
  LatticePoint outer;  // outside the box, l1-adjacent to `inner`
  friend bool operator==(const EdgePair&, const EdgePair&) = default;
  friend auto operator<=>(const EdgePair&, const EdgePair&) = default;
};

struct BoundarySets {
  std::vector<LatticePoint> inner;  // sites at sup-distance r - 1 from center
  std::vector<LatticePoint> outer;  // ambient sites at sup-distance 1 from the box
  std::vector<EdgePair> edges;      // (x, x') with x inner, x' outer, l1 = 1
};

/// Inner/outer boundaries and edge pairs of `box` relative to `ambient`
/// (std::nullopt: all of Z^{Nd}). All three lists are sorted.
BoundarySets boundary_sets(const Box& box, const std::optional<Box>& ambient = std::nullopt);

/// Only the inner boundary (does not depend on the ambient set).
std::vector<LatticePoint> inner_boundary(const Box& box);

/// dist(u, D) = min_a ||u - (a, ..., a)|| over a in Z^d.
long diagonal_distance(const LatticePoint& point);

/// dist(box, D) = min over sites x of the box of diagonal_distance(x).
long diagonal_distance(const Box& box);

/// r_{N,L} = 2N(L - 1) + N r0.
long decomposition_threshold(int particles, int radius, int r0);

struct Bipartition {
  std::vector<int> first;   // contains particle 0
  std::vector<int> second;
  friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

/// Searches the nontrivial bipartitions J | J^c of the particles for one with
/// ||u_j - u_i|| > 2(L - 1) + r0 on every cross pair. Consecutive splits
/// [0, n') | [n', N) are tried first. Throws DomainError for N = 1.
std::optional<Bipartition> decomposability(const Box& box, int r0);

/// Sufficient test diagonal_distance(center) > r_{N,L}.
bool sufficiently_decomposable(const Box& box, int r0);

/// For every particle j, whether Pi_j Lambda_L(x) and Pi_j Lambda_L(y) are disjoint.
std::vector<bool> projections_disjoint(const LatticePoint& x, const LatticePoint& y, int radius);

}  // namespace msa

#endif  // MSA_LATTICE_HPP
