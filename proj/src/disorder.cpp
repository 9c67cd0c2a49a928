#include "msa/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "msa/errors.hpp"

namespace msa {

MarginalDistribution::MarginalDistribution(Kind kind, std::vector<double> t, std::vector<double> F)
    : kind_(kind), knots_(std::move(t)), values_(std::move(F)) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw DomainError("CDF table needs at least two (t, F) pairs of equal length");
  }
  if (values_.front() != 0.0 || values_.back() != 1.0) {
    throw DomainError("CDF table must start at F = 0 and end at F = 1");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw DomainError("CDF knots must be strictly increasing");
    if (values_[i] < values_[i - 1]) throw DomainError("CDF values must be non-decreasing");
    holder_constant_ = std::max(holder_constant_, (values_[i] - values_[i - 1]) /
                                                      (knots_[i] - knots_[i - 1]));
  }
}

MarginalDistribution MarginalDistribution::uniform(double a, double b) {
  if (!(b > a)) throw DomainError("uniform(a, b) needs a < b");
  return MarginalDistribution(Kind::uniform, {a, b}, {0.0, 1.0});
}

MarginalDistribution MarginalDistribution::piecewise_linear(std::vector<double> t,
                                                            std::vector<double> F) {
  return MarginalDistribution(Kind::piecewise_linear, std::move(t), std::move(F));
}

double MarginalDistribution::cdf(double t) const {
  if (t <= knots_.front()) return 0.0;
  if (t >= knots_.back()) return 1.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const auto i = static_cast<std::size_t>(it - knots_.begin());
  const double w = (t - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
  return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

double MarginalDistribution::quantile(double u) const {
  if (u <= 0.0) return knots_.front();
  if (u >= 1.0) return knots_.back();
  // first segment whose upper CDF value exceeds u; flat segments are skipped
  auto it = std::upper_bound(values_.begin(), values_.end(), u);
  const auto i = static_cast<std::size_t>(it - values_.begin());
  const double w = (u - values_[i - 1]) / (values_[i] - values_[i - 1]);
  return knots_[i - 1] + w * (knots_[i] - knots_[i - 1]);
}

double cdf_increment(const MarginalDistribution& dist, double t, double eps) {
  if (!(eps > 0.0)) throw DomainError("cdf_increment needs eps > 0");
  return dist.cdf(t + eps) - dist.cdf(t);
}

// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) noexcept {
  return mix64(mix64(base_seed) ^ (trial * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

double site_uniform(std::uint64_t seed, const LatticePoint& site) noexcept {
  std::uint64_t h = mix64(seed ^ 0xa0761d6478bd642fULL);
  h = mix64(h ^ static_cast<std::uint64_t>(site.dim()));
  for (int c : site.coords()) {
    h = mix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));
  }
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------

DisorderSample DisorderSample::constant(std::span<const LatticePoint> region, double value) {
  DisorderSample out;
  for (const auto& x : region) out.set(x, value);
  return out;
}

double DisorderSample::at(const LatticePoint& site) const {
  auto it = values_.find(site);
  if (it == values_.end()) {
    std::string coords;
    for (int c : site.coords()) coords += (coords.empty() ? "" : ",") + std::to_string(c);
    throw CoverageError("disorder sample has no value at site (" + coords + ")");
  }
  return it->second;
}

void DisorderSample::set(const LatticePoint& site, double value) {
  if (site.particles() != 1) throw DomainError("potential values live on single-particle sites");
  values_[site] = value;
}

std::vector<LatticePoint> DisorderSample::sites() const {
  std::vector<LatticePoint> out;
  out.reserve(values_.size());
  for (const auto& [site, value] : values_) out.push_back(site);
  std::sort(out.begin(), out.end());
  return out;
}

DisorderSample DisorderSample::restricted(std::span<const LatticePoint> region) const {
  DisorderSample out;
  out.seed_ = seed_;
  for (const auto& x : region) out.values_[x] = at(x);
  return out;
}

DisorderSample sample(const MarginalDistribution& dist, std::uint64_t seed,
                      std::span<const LatticePoint> region) {
  DisorderSample out;
  out.seed_ = seed;
  out.values_.reserve(region.size());
  for (const auto& x : region) {
    if (x.particles() != 1) throw DomainError("potential values live on single-particle sites");
    out.values_[x] = dist.quantile(site_uniform(seed, x));
  }
  return out;
}

}  // namespace msa
