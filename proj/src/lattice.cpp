#include "msa/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "msa/errors.hpp"

namespace msa {

LatticePoint::LatticePoint(std::vector<int> coords, int particles, int dim)
    : coords_(std::move(coords)), particles_(particles), dim_(dim) {
  if (particles < 1 || dim < 1) {
    throw DomainError("lattice point needs N >= 1 and d >= 1");
  }
  if (coords_.size() != static_cast<std::size_t>(particles) * static_cast<std::size_t>(dim)) {
    throw DomainError("lattice point has " + std::to_string(coords_.size()) +
                      " coordinates, expected N*d = " + std::to_string(particles * dim));
  }
}

LatticePoint LatticePoint::single(std::vector<int> coords) {
  const int d = static_cast<int>(coords.size());
  return LatticePoint(std::move(coords), 1, d);
}

LatticePoint LatticePoint::origin(int particles, int dim) {
  return LatticePoint(std::vector<int>(static_cast<std::size_t>(particles * dim), 0), particles,
                      dim);
}

LatticePoint LatticePoint::projection(int j) const {
  if (j < 0 || j >= particles_) throw DomainError("projection index out of range");
  auto first = coords_.begin() + static_cast<std::ptrdiff_t>(j) * dim_;
  return LatticePoint(std::vector<int>(first, first + dim_), 1, dim_);
}

LatticePoint LatticePoint::shifted(std::size_t axis, int delta) const {
  LatticePoint out = *this;
  out.coords_[axis] += delta;
  return out;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int c : p.coords()) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

LatticePoint concat(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) throw DomainError("concat: dimension mismatch");
  std::vector<int> c(a.coords().begin(), a.coords().end());
  c.insert(c.end(), b.coords().begin(), b.coords().end());
  return LatticePoint(std::move(c), a.particles() + b.particles(), a.dim());
}

namespace {

void require_compatible(const LatticePoint& a, const LatticePoint& b) {
  if (a.particles() != b.particles() || a.dim() != b.dim()) {
    throw DomainError("lattice points live in different spaces");
  }
}

}  // namespace

long sup_distance(const LatticePoint& a, const LatticePoint& b) {
  require_compatible(a, b);
  long best = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    best = std::max(best, std::labs(static_cast<long>(a[k]) - b[k]));
  }
  return best;
}

long l1_distance(const LatticePoint& a, const LatticePoint& b) {
  require_compatible(a, b);
  long sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::labs(static_cast<long>(a[k]) - b[k]);
  return sum;
}

// ---------------------------------------------------------------------------

Box::Box(LatticePoint center, int radius) : center_(std::move(center)), radius_(radius) {
  if (radius < 1) throw DomainError("box radius must be positive");
  const std::size_t s = static_cast<std::size_t>(side());
  count_ = 1;
  for (std::size_t k = 0; k < center_.size(); ++k) {
    if (count_ > std::numeric_limits<std::size_t>::max() / s) {
      throw CapacityError("box site count overflows");
    }
    count_ *= s;
  }
}

bool Box::contains(const LatticePoint& p) const {
  if (p.particles() != particles() || p.dim() != dim()) return false;
  return sup_distance(p, center_) <= radius_ - 1;
}

bool Box::contains(const Box& other) const {
  if (other.particles() != particles() || other.dim() != dim()) return false;
  return sup_distance(other.center_, center_) + other.radius_ <= radius_;
}

LatticePoint Box::site(std::size_t index) const {
  const std::size_t s = static_cast<std::size_t>(side());
  std::vector<int> c(center_.size());
  for (std::size_t k = c.size(); k-- > 0;) {
    c[k] = center_[k] - (radius_ - 1) + static_cast<int>(index % s);
    index /= s;
  }
  return LatticePoint(std::move(c), particles(), dim());
}

std::optional<std::size_t> Box::index_of(const LatticePoint& p) const {
  if (!contains(p)) return std::nullopt;
  const std::size_t s = static_cast<std::size_t>(side());
  std::size_t index = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    index = index * s + static_cast<std::size_t>(p[k] - (center_[k] - (radius_ - 1)));
  }
  return index;
}

long Box::distance_to(const LatticePoint& p) const {
  require_compatible(p, center_);
  long best = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    best = std::max(best, std::labs(static_cast<long>(p[k]) - center_[k]) - (radius_ - 1));
  }
  return best;
}

Box Box::projection(int j) const { return Box(center_.projection(j), radius_); }

Box product(const Box& a, const Box& b) {
  if (a.radius() != b.radius()) throw DomainError("product of boxes needs equal radii");
  return Box(concat(a.center(), b.center()), a.radius());
}

bool boxes_overlap(const Box& a, const Box& b) {
  return sup_distance(a.center(), b.center()) <= static_cast<long>(a.radius() - 1) + (b.radius() - 1);
}

// ---------------------------------------------------------------------------

Region::Region(std::vector<LatticePoint> sites) : sites_(std::move(sites)) {
  if (!sites_.empty()) {
    particles_ = sites_.front().particles();
    dim_ = sites_.front().dim();
  }
  index_.reserve(sites_.size());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const auto& p = sites_[i];
    if (p.particles() != particles_ || p.dim() != dim_) {
      throw DomainError("region mixes points of different spaces");
    }
    if (!index_.emplace(p, i).second) throw DomainError("region has a repeated site");
  }
}

Region Region::from_box(const Box& box) {
  std::vector<LatticePoint> sites;
  sites.reserve(box.site_count());
  for (std::size_t i = 0; i < box.site_count(); ++i) sites.push_back(box.site(i));
  return Region(std::move(sites));
}

std::optional<std::size_t> Region::index_of(const LatticePoint& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Region Region::minus(const Box& box) const {
  std::vector<LatticePoint> kept;
  for (const auto& p : sites_) {
    if (!box.contains(p)) kept.push_back(p);
  }
  return Region(std::move(kept));
}

std::vector<LatticePoint> Region::projected_sites() const {
  std::set<LatticePoint> seen;
  for (const auto& p : sites_) {
    for (int j = 0; j < p.particles(); ++j) seen.insert(p.projection(j));
  }
  return {seen.begin(), seen.end()};
}

Region product(const Region& a, const Region& b) {
  std::vector<LatticePoint> sites;
  sites.reserve(a.size() * b.size());
  for (const auto& x : a.sites()) {
    for (const auto& y : b.sites()) sites.push_back(concat(x, y));
  }
  return Region(std::move(sites));
}

// ---------------------------------------------------------------------------

std::vector<LatticePoint> inner_boundary(const Box& box) {
  std::vector<LatticePoint> inner;
  const long edge = box.radius() - 1;
  for (std::size_t i = 0; i < box.site_count(); ++i) {
    auto x = box.site(i);
    if (sup_distance(x, box.center()) == edge) inner.push_back(std::move(x));
  }
  return inner;
}

BoundarySets boundary_sets(const Box& box, const std::optional<Box>& ambient) {
  if (ambient && !ambient->contains(box)) {
    throw ContainmentError("boundary_sets: box is not contained in the ambient box");
  }
  auto in_ambient = [&](const LatticePoint& p) { return !ambient || ambient->contains(p); };

  BoundarySets out;
  out.inner = inner_boundary(box);

  const Box shell(box.center(), box.radius() + 1);
  for (std::size_t i = 0; i < shell.site_count(); ++i) {
    auto x = shell.site(i);
    if (sup_distance(x, box.center()) == box.radius() && in_ambient(x)) {
      out.outer.push_back(std::move(x));
    }
  }

  const long r = box.radius();
  for (const auto& x : out.inner) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (int delta : {-1, +1}) {
        auto y = x.shifted(k, delta);
        if (std::labs(static_cast<long>(y[k]) - box.center()[k]) == r && in_ambient(y)) {
          out.edges.push_back({x, std::move(y)});
        }
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Per spatial axis, the range of the particle coordinates, narrowed by `shrink`
// at both ends. min_a max_j |x_j - a| over integers a equals ceil(range / 2).
long diagonal_distance_impl(const LatticePoint& p, long shrink) {
  long best = 0;
  for (int k = 0; k < p.dim(); ++k) {
    long lo = std::numeric_limits<long>::max();
    long hi = std::numeric_limits<long>::min();
    for (int j = 0; j < p.particles(); ++j) {
      const long c = p[static_cast<std::size_t>(j * p.dim() + k)];
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    const long range = std::max(0L, hi - lo - 2 * shrink);
    best = std::max(best, (range + 1) / 2);
  }
  return best;
}

}  // namespace

long diagonal_distance(const LatticePoint& point) { return diagonal_distance_impl(point, 0); }

long diagonal_distance(const Box& box) {
  return diagonal_distance_impl(box.center(), box.radius() - 1);
}

long decomposition_threshold(int particles, int radius, int r0) {
  return 2L * particles * (radius - 1) + static_cast<long>(particles) * r0;
}

std::optional<Bipartition> decomposability(const Box& box, int r0) {
  const int n = box.particles();
  if (n < 2) throw DomainError("decomposability is undefined for a single particle");
  if (n > 20) throw CapacityError("decomposability search limited to N <= 20");

  const long threshold = 2L * (box.radius() - 1) + r0;
  std::vector<LatticePoint> u;
  for (int j = 0; j < n; ++j) u.push_back(box.center().projection(j));

  auto separated = [&](std::uint32_t mask) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const bool jin = (mask >> j) & 1U;
        const bool iin = (mask >> i) & 1U;
        if (jin && !iin && sup_distance(u[j], u[i]) <= threshold) return false;
      }
    }
    return true;
  };
  auto to_partition = [&](std::uint32_t mask) {
    Bipartition out;
    for (int j = 0; j < n; ++j) ((mask >> j) & 1U ? out.first : out.second).push_back(j);
    return out;
  };

  const std::uint32_t full = (1U << n) - 1U;
  for (int cut = 1; cut < n; ++cut) {
    const std::uint32_t mask = (1U << cut) - 1U;
    if (separated(mask)) return to_partition(mask);
  }
  for (std::uint32_t mask = 1; mask < full; mask += 2) {  // particle 0 always in `first`
    if (separated(mask)) return to_partition(mask);
  }
  return std::nullopt;
}

bool sufficiently_decomposable(const Box& box, int r0) {
  return diagonal_distance(box.center()) > decomposition_threshold(box.particles(), box.radius(), r0);
}

std::vector<bool> projections_disjoint(const LatticePoint& x, const LatticePoint& y, int radius) {
  require_compatible(x, y);
  std::vector<bool> out(static_cast<std::size_t>(x.particles()));
  const long reach = 2L * (radius - 1);
  for (int j = 0; j < x.particles(); ++j) {
    bool disjoint = false;
    for (int k = 0; k < x.dim(); ++k) {
      const auto a = static_cast<std::size_t>(j * x.dim() + k);
      if (std::labs(static_cast<long>(x[a]) - y[a]) > reach) disjoint = true;
    }
    out[static_cast<std::size_t>(j)] = disjoint;
  }
  return out;
}

}  // namespace msa
