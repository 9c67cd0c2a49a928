#include "msa/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>

#include "msa/errors.hpp"

namespace msa {

InteractionSpec::InteractionSpec(std::vector<double> table) : table_(std::move(table)) {
  if (table_.empty()) throw DomainError("interaction table needs u2(0)");
  for (double v : table_) {
    if (!std::isfinite(v)) throw DomainError("interaction must be bounded");
  }
}

InteractionSpec InteractionSpec::step(double u0, int r0) {
  if (r0 < 0) throw DomainError("interaction range must be non-negative");
  return InteractionSpec(std::vector<double>(static_cast<std::size_t>(r0) + 1, u0));
}

double InteractionSpec::operator()(long r) const noexcept {
  if (r < 0 || r >= static_cast<long>(table_.size())) return 0.0;
  return table_[static_cast<std::size_t>(r)];
}

double InteractionSpec::bound() const noexcept {
  double b = 0.0;
  for (double v : table_) b = std::max(b, std::abs(v));
  return b;
}

bool InteractionSpec::vanishes() const noexcept {
  return std::all_of(table_.begin(), table_.end(), [](double v) { return v == 0.0; });
}

double interaction_energy(const InteractionSpec& u, const LatticePoint& x) {
  double total = 0.0;
  for (int j = 0; j < x.particles(); ++j) {
    for (int k = j + 1; k < x.particles(); ++k) {
      total += u(sup_distance(x.projection(j), x.projection(k)));
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

Hamiltonian::Hamiltonian(Region region, std::optional<Box> box, double coupling, SparseMatrix matrix)
    : region_(std::move(region)), box_(std::move(box)), coupling_(coupling), matrix_(std::move(matrix)) {
  matrix_.makeCompressed();
}

const Box& Hamiltonian::cube() const {
  if (!box_) throw DomainError("operation needs a Hamiltonian defined on a cube");
  return *box_;
}

double Hamiltonian::entry(const LatticePoint& x, const LatticePoint& y) const {
  auto i = region_.index_of(x);
  auto j = region_.index_of(y);
  if (!i || !j) throw ContainmentError("entry: site outside the operator's region");
  return matrix_.coeff(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j));
}

Hamiltonian Hamiltonian::restricted(const Region& sub, std::optional<Box> sub_box) const {
  std::vector<Eigen::Index> map(sub.size());
  for (std::size_t a = 0; a < sub.size(); ++a) {
    auto i = region_.index_of(sub.site(a));
    if (!i) throw ContainmentError("restriction: site outside the operator's region");
    map[a] = static_cast<Eigen::Index>(*i);
  }
  // inverse map: ambient index -> sub index or -1
  std::vector<Eigen::Index> back(region_.size(), -1);
  for (std::size_t a = 0; a < map.size(); ++a) back[static_cast<std::size_t>(map[a])] = static_cast<Eigen::Index>(a);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(matrix_.nonZeros()));
  for (Eigen::Index col = 0; col < matrix_.outerSize(); ++col) {
    const Eigen::Index bc = back[static_cast<std::size_t>(col)];
    if (bc < 0) continue;
    for (SparseMatrix::InnerIterator it(matrix_, col); it; ++it) {
      const Eigen::Index br = back[static_cast<std::size_t>(it.row())];
      if (br >= 0) triplets.emplace_back(br, bc, it.value());
    }
  }
  const auto n = static_cast<Eigen::Index>(sub.size());
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Hamiltonian(sub, std::move(sub_box), coupling_, std::move(m));
}

Hamiltonian Hamiltonian::restricted(const Box& sub) const {
  if (box_ && !box_->contains(sub)) {
    throw ContainmentError("restriction: sub-box not contained in the operator's box");
  }
  return restricted(Region::from_box(sub), sub);
}

Hamiltonian assemble(const Region& region, double coupling, const DisorderSample& potential,
                     const std::optional<InteractionSpec>& interaction) {
  const auto n = static_cast<Eigen::Index>(region.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(region.size() * (2 * static_cast<std::size_t>(region.particles() * region.dim()) + 1));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& x = region.site(static_cast<std::size_t>(i));
    double diag = 0.0;
    for (int j = 0; j < x.particles(); ++j) diag += coupling * potential.at(x.projection(j));
    if (interaction && x.particles() > 1) diag += interaction_energy(*interaction, x);
    triplets.emplace_back(i, i, diag);

    for (std::size_t k = 0; k < x.size(); ++k) {
      for (int delta : {-1, +1}) {
        if (auto j = region.index_of(x.shifted(k, delta))) {
          triplets.emplace_back(i, static_cast<Eigen::Index>(*j), -1.0);
        }
      }
    }
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());

  std::optional<Box> box;
  return Hamiltonian(region, box, coupling, std::move(m));
}

Hamiltonian assemble(const Box& box, double coupling, const DisorderSample& potential,
                     const std::optional<InteractionSpec>& interaction) {
  auto h = assemble(Region::from_box(box), coupling, potential, interaction);
  return Hamiltonian(h.region(), box, coupling, h.matrix());
}

// ---------------------------------------------------------------------------

DirichletSplit dirichlet_split(const Hamiltonian& h, const Box& inner) {
  const Region& ambient = h.region();
  const Region inner_region = Region::from_box(inner);
  for (const auto& x : inner_region.sites()) {
    if (!ambient.contains(x)) throw ContainmentError("dirichlet_split: inner box leaves the region");
  }
  if (inner_region.size() == ambient.size()) {
    throw ContainmentError("dirichlet_split: inner box must be a strict subset");
  }
  const Region complement = ambient.minus(inner);

  std::vector<EdgePair> edges;
  for (const auto& x : inner_boundary(inner)) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (int delta : {-1, +1}) {
        auto y = x.shifted(k, delta);
        if (!inner.contains(y) && ambient.contains(y)) edges.push_back({x, std::move(y)});
      }
    }
  }
  std::sort(edges.begin(), edges.end());

  const auto n = static_cast<Eigen::Index>(ambient.size());
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& e : edges) {
    const auto a = static_cast<Eigen::Index>(*ambient.index_of(e.inner));
    const auto b = static_cast<Eigen::Index>(*ambient.index_of(e.outer));
    triplets.emplace_back(a, b, -1.0);
    triplets.emplace_back(b, a, -1.0);
  }
  SparseMatrix coupling(n, n);
  coupling.setFromTriplets(triplets.begin(), triplets.end());

  return DirichletSplit{h.restricted(inner_region, inner), h.restricted(complement),
                        std::move(coupling), std::move(edges)};
}

SparseMatrix reassemble(const Hamiltonian& ambient, const DirichletSplit& split) {
  const Region& region = ambient.region();
  std::vector<Eigen::Triplet<double>> triplets;
  auto embed = [&](const Hamiltonian& part) {
    const SparseMatrix& m = part.matrix();
    for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
      const auto c = static_cast<Eigen::Index>(*region.index_of(part.region().site(static_cast<std::size_t>(col))));
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        const auto r = static_cast<Eigen::Index>(*region.index_of(part.region().site(static_cast<std::size_t>(it.row()))));
        triplets.emplace_back(r, c, it.value());
      }
    }
  };
  embed(split.inner);
  embed(split.complement);
  const auto n = static_cast<Eigen::Index>(region.size());
  SparseMatrix blocks(n, n);
  blocks.setFromTriplets(triplets.begin(), triplets.end());
  return blocks + split.coupling;
}

// ---------------------------------------------------------------------------

Spectrum spectrum(const Hamiltonian& h, bool with_vectors, std::size_t cap) {
  if (h.size() > cap) {
    throw CapacityError("dense eigensolve refused: " + std::to_string(h.size()) +
                        " sites exceed the cap of " + std::to_string(cap) +
                        "; use resolvent-only paths for this volume");
  }
  Spectrum out;
  if (h.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      h.dense(), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("symmetric eigensolve did not converge");
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

void write_coo(std::ostream& os, const Hamiltonian& h) {
  const SparseMatrix& m = h.matrix();
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) entries.emplace_back(it.row(), col, it.value());
  }
  std::sort(entries.begin(), entries.end());
  os << "% " << h.size() << ' ' << h.size() << ' ' << entries.size() << '\n';
  os << std::setprecision(17);
  for (const auto& [r, c, v] : entries) os << r << ' ' << c << ' ' << v << '\n';
}

}  // namespace msa
