#ifndef MSA_DISORDER_HPP
#define MSA_DISORDER_HPP

// IID random potentials keyed per site. The value at a site is a pure function
// of (seed, site coordinates), so overlapping regions agree and disjoint
// regions are independent by construction.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "msa/lattice.hpp"

namespace msa {

/// Marginal law F_V of the single-site potential.
class MarginalDistribution {
 public:
  enum class Kind { uniform, piecewise_linear };

  /// Uniform on [a, b]; Hoelder exponent 1, constant 1 / (b - a).
  static MarginalDistribution uniform(double a, double b);

  /// Continuous CDF interpolating (t_i, F_i) linearly; F must start at 0,
  /// end at 1 and be non-decreasing, t strictly increasing.
  static MarginalDistribution piecewise_linear(std::vector<double> t, std::vector<double> F);

  Kind kind() const noexcept { return kind_; }
  double cdf(double t) const;
  /// Generalized inverse of the CDF on [0, 1).
  double quantile(double u) const;

  double support_min() const { return knots_.front(); }
  double support_max() const { return knots_.back(); }

  double holder_exponent() const noexcept { return 1.0; }
  /// Largest slope of the CDF (its density bound).
  double holder_constant() const noexcept { return holder_constant_; }

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& cdf_values() const noexcept { return values_; }

 private:
  MarginalDistribution(Kind kind, std::vector<double> t, std::vector<double> F);

  Kind kind_;
  std::vector<double> knots_;
  std::vector<double> values_;
  double holder_constant_ = 0.0;
};

/// F(t + eps) - F(t).
double cdf_increment(const MarginalDistribution& dist, double t, double eps);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable derivation of the seed of trial t from a base seed.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) noexcept;

/// Uniform variate in [0, 1) keyed on (seed, site coordinates).
double site_uniform(std::uint64_t seed, const LatticePoint& site) noexcept;

/// Realized potential values over a finite set of single-particle sites.
class DisorderSample {
 public:
  DisorderSample() = default;

  /// V(x) = value for every site of `region`.
  static DisorderSample constant(std::span<const LatticePoint> region, double value);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool covers(const LatticePoint& site) const { return values_.contains(site); }

  /// Throws CoverageError if the site was not sampled.
  double at(const LatticePoint& site) const;

  void set(const LatticePoint& site, double value);

  /// Sites in increasing lexicographic order.
  std::vector<LatticePoint> sites() const;

  /// Restriction to `region`; every site must be covered.
  DisorderSample restricted(std::span<const LatticePoint> region) const;

  friend DisorderSample sample(const MarginalDistribution&, std::uint64_t,
                               std::span<const LatticePoint>);

 private:
  std::uint64_t seed_ = 0;
  std::unordered_map<LatticePoint, double, LatticePointHash> values_;
};

/// Independent draws from `dist` at every site of `region` (single-particle sites).
DisorderSample sample(const MarginalDistribution& dist, std::uint64_t seed,
                      std::span<const LatticePoint> region);

}  // namespace msa

#endif  // MSA_DISORDER_HPP
