#include "msa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "msa/errors.hpp"

namespace msa {

namespace {

long long isqrt(long long n) {
  auto r = static_cast<long long>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_budget(const Box& box, std::size_t budget) {
  if (box.site_count() > budget) {
    throw CapacityError("box of radius " + std::to_string(box.radius()) + " has " +
                        std::to_string(box.site_count()) + " sites, over the budget of " + std::to_string(budget));
  }
}

// Centers c with Lambda_ell(c) inside box.
Box subcube_centers(const Box& box, int ell) { return Box(box.center(), box.radius() - ell + 1); }

bool has_disjoint_pair(const std::vector<LatticePoint>& centers, int ell) {
  for (std::size_t a = 0; a < centers.size(); ++a) {
    for (std::size_t b = a + 1; b < centers.size(); ++b) {
      if (!boxes_overlap(Box(centers[a], ell), Box(centers[b], ell))) return true;
    }
  }
  return false;
}

ClassifyOptions classify_options(double m, const HarnessOptions& opts, int cnr_radius) {
  ClassifyOptions co;
  co.m = m;
  co.beta = opts.beta;
  co.cnr_radius = cnr_radius;
  co.scan = opts.scan;
  co.resolvent = opts.resolvent;
  return co;
}

std::vector<LatticePoint> projected_sites(const Box& box) {
  std::set<LatticePoint> sites;
  for (int j = 0; j < box.particles(); ++j) {
    const Box pj = box.projection(j);
    for (std::size_t i = 0; i < pj.site_count(); ++i) sites.insert(pj.site(i));
  }
  return {sites.begin(), sites.end()};
}

}  // namespace

ScaleSchedule schedule(int L0, int k_max) {
  if (L0 < 2) throw DomainError("schedule: L0 must be at least 2");
  if (k_max < 0) throw DomainError("schedule: k_max must be non-negative");
  ScaleSchedule s{L0, k_max, {L0}};
  for (int k = 0; k < k_max; ++k) {
    const long long L = s.scales.back();
    const long long next = isqrt(L * L * L);
    if (next <= L) {
      throw DomainError("schedule: floor(" + std::to_string(L) + "^{3/2}) = " + std::to_string(next) +
                        " does not increase");
    }
    if (next > std::numeric_limits<int>::max()) throw DomainError("schedule: scale overflows");
    s.scales.push_back(static_cast<int>(next));
  }
  return s;
}

MassSequence mass_sequence(double m1, int L0, int N) {
  if (!(m1 > 0.0) || L0 < 1 || N < 1) throw DomainError("mass_sequence: need m1 > 0, L0 >= 1, N >= 1");
  MassSequence s{m1, L0, {m1}};
  const double step = std::pow(static_cast<double>(L0), -0.125);
  for (int n = 2; n <= N; ++n) s.values.push_back(s.values.back() - step);
  if (!(s.values.back() > 0.0)) {
    throw DomainError("mass_sequence: m^(" + std::to_string(N) + ") = " + std::to_string(s.values.back()) +
                      " is not positive");
  }
  return s;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool ModelSpec::degenerate() const {
  return g == 0.0 || constant_potential.has_value() ||
         distribution.support_min() == distribution.support_max();
}

DisorderSample draw_potential(const ModelSpec& model, const Box& box, std::uint64_t seed) {
  const auto list = projected_sites(box);
  if (model.constant_potential) return DisorderSample::constant(list, *model.constant_potential);
  return sample(model.distribution, seed, list);
}

Hamiltonian draw_hamiltonian(const ModelSpec& model, const Box& box, std::uint64_t seed) {
  return assemble(box, model.g, draw_potential(model, box, seed), model.interaction);
}

int default_cnr_radius(int L) {
  // floor(L^{2/3}) = largest c with c^3 <= L^2
  const long long target = static_cast<long long>(L) * L;
  long long c = static_cast<long long>(std::cbrt(static_cast<double>(target)));
  while (c * c * c > target) --c;
  while ((c + 1) * (c + 1) * (c + 1) <= target) ++c;
  return static_cast<int>(c);
}

ScaleReport summarize(int L, double E, double m, const HarnessOptions& opts, int cnr_radius,
                      const std::vector<TrialRecord>& records) {
  ScaleReport r;
  r.L = L;
  r.E = E;
  r.m = m;
  r.p = opts.p;
  r.cnr_radius = cnr_radius;
  r.trials = records.size();
  for (const auto& t : records) {
    r.singular_count += t.singular;
    r.resonant_count += t.resonant;
    r.cnr_fail_count += t.cnr_fail;
  }
  r.bound = std::pow(static_cast<double>(L), -opts.p);
  r.ci = wilson_interval(r.singular_count, r.trials);
  r.p_defined = r.trials > 0;
  r.p_hat = r.p_defined ? static_cast<double>(r.singular_count) / static_cast<double>(r.trials)
                        : std::numeric_limits<double>::quiet_NaN();
  r.pass = r.p_defined && r.ci.hi <= r.bound;
  return r;
}

std::vector<TrialRecord> run_trials(const ModelSpec& model, double E, double m, int L, std::size_t trials,
                                    std::uint64_t base_seed, const HarnessOptions& opts, int dichotomy_ell) {
  const Box box(LatticePoint::origin(model.N, model.d), L);
  check_budget(box, opts.site_budget);
  const int cnr = opts.cnr_radius > 0 ? opts.cnr_radius : default_cnr_radius(L);
  const auto co = classify_options(m, opts, cnr);
  const bool dichotomy = dichotomy_ell > 0 && dichotomy_ell < L;
  const auto co_ell = classify_options(m, opts, dichotomy ? dichotomy_ell : 0);
  const auto co_sub = classify_options(m, opts, 0);

  std::vector<TrialRecord> records(trials);
  parallel_for(trials, opts.threads, [&](std::size_t t) {
    const auto h = draw_hamiltonian(model, box, trial_seed(base_seed, t));
    const auto c = classify(h, E, co);
    TrialRecord rec;
    rec.singular = !c.ns;
    rec.resonant = c.resonant;
    rec.cnr_fail = !c.cnr;
    if (dichotomy && rec.singular) {
      rec.not_cnr_ell = !classify(h, E, co_ell).cnr;
      std::vector<LatticePoint> singular;
      const Box centers = subcube_centers(box, dichotomy_ell);
      for (std::size_t i = 0; i < centers.site_count(); ++i) {
        const auto x = centers.site(i);
        if (!classify(h.restricted(Box(x, dichotomy_ell)), E, co_sub).ns) singular.push_back(x);
      }
      rec.two_singular_ell = has_disjoint_pair(singular, dichotomy_ell);
    }
    records[t] = rec;
  });
  return records;
}

ScaleReport estimate_ss(const ModelSpec& model, double E, double m, int L, std::size_t trials,
                        std::uint64_t base_seed, const HarnessOptions& opts) {
  const int cnr = opts.cnr_radius > 0 ? opts.cnr_radius : default_cnr_radius(L);
  return summarize(L, E, m, opts, cnr, run_trials(model, E, m, L, trials, base_seed, opts));
}

// ---------------------------------------------------------------------------

WegnerReport wegner_estimate(const ModelSpec& model, double E, int L, double epsilon, std::size_t trials,
                             std::uint64_t base_seed, const WegnerOptions& opts) {
  if (epsilon < 0.0) throw DomainError("wegner_estimate: epsilon must be non-negative");
  const Box box(LatticePoint::origin(model.N, model.d), L);
  if (box.site_count() > opts.dense_cap) {
    throw CapacityError("wegner_estimate: " + std::to_string(box.site_count()) +
                        " sites exceed the dense eigensolve cap of " + std::to_string(opts.dense_cap));
  }
  std::vector<char> hit(trials, 0);
  parallel_for(trials, opts.threads, [&](std::size_t t) {
    const auto h = draw_hamiltonian(model, box, trial_seed(base_seed, t));
    const auto sp = spectrum(h, false, opts.dense_cap);
    hit[t] = (sp.values.array() - E).abs().minCoeff() <= epsilon;
  });

  WegnerReport r;
  r.L = L;
  r.E = E;
  r.epsilon = epsilon;
  r.trials = trials;
  for (char c : hit) r.hits += static_cast<std::size_t>(c);
  r.p_defined = trials > 0;
  r.p_hat = r.p_defined ? static_cast<double>(r.hits) / static_cast<double>(trials)
                        : std::numeric_limits<double>::quiet_NaN();
  r.ci = wilson_interval(r.hits, trials);
  r.volume = box.site_count();
  const double vol = static_cast<double>(r.volume);
  r.holder_constant = model.distribution.holder_constant();
  r.holder_exponent = model.distribution.holder_exponent();
  r.standard_bound = model.g == 0.0
                         ? std::numeric_limits<double>::infinity()
                         : vol * r.holder_constant * std::pow(2.0 * epsilon / std::abs(model.g), r.holder_exponent);
  r.standard_holds = r.ci.lo <= r.standard_bound;
  r.beta = opts.beta;
  r.beta_prime = opts.beta_prime;
  r.exp_threshold = std::exp(-std::pow(vol, opts.beta));
  r.exp_bound = std::exp(-std::pow(vol, opts.beta_prime));
  r.exp_applicable = epsilon <= r.exp_threshold;
  r.exp_holds = !r.exp_applicable || r.ci.lo <= r.exp_bound;

  if (r.volume == 1 && !model.constant_potential && !model.interaction) {
    // the single eigenvalue is g V(0): P(|g V - E| <= eps)
    if (model.g == 0.0) {
      r.exact = std::abs(E) <= epsilon ? 1.0 : 0.0;
    } else {
      const double a = (E - epsilon) / model.g;
      const double b = (E + epsilon) / model.g;
      r.exact = model.distribution.cdf(std::max(a, b)) - model.distribution.cdf(std::min(a, b));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

InductionReport verify_induction(const ModelSpec& model, double E, double m, int L0, int k_max,
                                 std::size_t trials, std::uint64_t base_seed, const HarnessOptions& opts) {
  if (k_max < 1) throw DomainError("verify_induction: need at least two scales");
  InductionReport out;
  out.schedule = schedule(L0, k_max);
  const auto& L = out.schedule.scales;

  std::vector<std::vector<TrialRecord>> records;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const int ell = k == 0 ? 0 : L[k - 1];
    records.push_back(run_trials(model, E, m, L[k], trials, base_seed, opts, ell));
    const int cnr = opts.cnr_radius > 0 ? opts.cnr_radius : default_cnr_radius(L[k]);
    out.scales.push_back(summarize(L[k], E, m, opts, cnr, records.back()));
  }

  out.pass = true;
  for (std::size_t k = 0; k + 1 < L.size(); ++k) {
    InductionStep s;
    s.L_from = L[k];
    s.L_to = L[k + 1];
    s.premise = out.scales[k].pass;
    s.conclusion = out.scales[k + 1].pass;
    s.vacuous = opts.p <= 0.0;
    s.degenerate = model.degenerate();
    s.pass = s.vacuous || (!s.degenerate && (!s.premise || s.conclusion));
    for (const auto& t : records[k + 1]) {
      if (!t.singular) continue;
      s.singular_not_cnr += t.not_cnr_ell;
      s.singular_two_disjoint += t.two_singular_ell;
      s.singular_unexplained += !t.not_cnr_ell && !t.two_singular_ell;
    }
    if (!s.pass) out.pass = false;
    out.steps.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------

MpEventReport mp_step_events(const ModelSpec& model, std::size_t trials, std::uint64_t base_seed,
                             const MpEventOptions& opts) {
  if (model.N < 2) throw DomainError("mp_step_events: needs N >= 2");
  if (opts.center.particles() != model.N || opts.center.dim() != model.d) {
    throw DomainError("mp_step_events: center does not match the configuration space");
  }
  const auto sched = schedule(opts.L0, 1);
  MpEventReport r;
  r.L_small = sched.scales[0];
  r.L_large = sched.scales[1];
  const int r0 = model.interaction ? model.interaction->range() : 0;
  r.r_threshold = decomposition_threshold(model.N, r.L_small, r0);
  r.b_separation = 9L * (r.L_small + r.r_threshold);
  r.trials = trials;

  const Box ambient(opts.center, r.L_large);
  check_budget(ambient, opts.harness.site_budget);
  const Box centers = subcube_centers(ambient, r.L_small);
  std::vector<LatticePoint> near;
  for (std::size_t i = 0; i < centers.site_count(); ++i) {
    auto x = centers.site(i);
    if (diagonal_distance(Box(x, r.L_small)) <= r.r_threshold) near.push_back(std::move(x));
  }
  const auto co_ambient = classify_options(opts.m, opts.harness, r.L_small);
  const auto co_sub = classify_options(opts.m, opts.harness, 0);

  r.log.resize(trials);
  std::vector<std::size_t> audited(trials, 0);
  std::vector<std::size_t> cross(trials, 0);
  parallel_for(trials, opts.harness.threads, [&](std::size_t t) {
    const std::uint64_t seed = trial_seed(base_seed, t);
    const auto h = draw_hamiltonian(model, ambient, seed);
    std::vector<LatticePoint> singular;
    for (const auto& x : near) {
      if (!classify(h.restricted(Box(x, r.L_small)), opts.E, co_sub).ns) singular.push_back(x);
    }
    MpTrial rec;
    rec.near_diagonal_singular = singular.size();
    rec.s_event = !singular.empty();
    for (std::size_t a = 0; a < singular.size(); ++a) {
      for (std::size_t b = a + 1; b < singular.size(); ++b) {
        const auto& x = singular[a];
        const auto& y = singular[b];
        const auto disjoint = projections_disjoint(x, y, r.L_small);
        const bool far = sup_distance(x, y) > r.b_separation;
        if (far || std::all_of(disjoint.begin(), disjoint.end(), [](bool v) { return v; })) {
          const auto px = draw_potential(model, Box(x, r.L_small), seed).sites();
          const auto py = draw_potential(model, Box(y, r.L_small), seed).sites();
          std::vector<LatticePoint> shared;
          std::set_intersection(px.begin(), px.end(), py.begin(), py.end(), std::back_inserter(shared));
          // near-diagonal boxes this far apart cannot share a particle site
          if (far && !shared.empty()) throw Error("mp_step_events: separated sub-boxes share disorder sites");
          ++audited[t];
          if (!shared.empty()) ++cross[t];
        }
        if (sup_distance(x, y) > r.b_separation) rec.b_event = true;
      }
    }
    const auto c = classify(h, opts.E, co_ambient);
    rec.ambient_cnr = c.cnr;
    rec.ambient_ns = c.ns;
    rec.dichotomy_violation = !rec.s_event && !rec.b_event && rec.ambient_cnr && !rec.ambient_ns;
    r.log[t] = rec;
  });
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& rec = r.log[t];
    r.s_events += rec.s_event;
    r.b_events += rec.b_event;
    r.neither += !rec.s_event && !rec.b_event;
    r.dichotomy_violations += rec.dichotomy_violation;
    r.separated_pairs_checked += audited[t];
    r.cross_overlap_pairs += cross[t];
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void require_no_cross_interaction(const Region& a, const Region& b, const std::optional<InteractionSpec>& interaction) {
  if (!interaction || interaction->vanishes()) return;
  const auto pa = a.projected_sites();
  const auto pb = b.projected_sites();
  for (const auto& x : pa) {
    for (const auto& y : pb) {
      const long r = sup_distance(x, y);
      if ((*interaction)(r) != 0.0) {
        throw InteractionNonzeroError("tensor_spectrum_check: particles of the two factors interact at distance " +
                                      std::to_string(r));
      }
    }
  }
}

// max |sorted Sigma(h) - sorted {lambda_a + mu_b}|
double sum_deviation(const Hamiltonian& h, const Spectrum& sa, const Spectrum& sb) {
  const auto sh = spectrum(h);
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(sa.values.size() * sb.values.size()));
  for (double la : sa.values) {
    for (double mb : sb.values) sums.push_back(la + mb);
  }
  std::sort(sums.begin(), sums.end());
  double dev = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    dev = std::max(dev, std::abs(sums[i] - sh.values[static_cast<Eigen::Index>(i)]));
  }
  return dev;
}

}  // namespace

TensorCheck tensor_spectrum_check(const Region& a, const Region& b, double g, const DisorderSample& potential,
                                  const std::optional<InteractionSpec>& interaction) {
  if (a.dim() != b.dim()) throw DomainError("tensor_spectrum_check: factor dimensions differ");
  require_no_cross_interaction(a, b, interaction);
  if (a.size() * b.size() > kDenseCap) {
    throw CapacityError("tensor_spectrum_check: product volume exceeds the dense cap");
  }
  const auto ha = assemble(a, g, potential, interaction);
  const auto hb = assemble(b, g, potential, interaction);
  const auto h = assemble(product(a, b), g, potential, interaction);
  TensorCheck out;
  out.size = h.size();
  out.deviation = sum_deviation(h, spectrum(ha), spectrum(hb));
  return out;
}

TensorCheck tensor_spectrum_check(const Box& a, const Box& b, double g, const DisorderSample& potential,
                                  const std::optional<InteractionSpec>& interaction,
                                  const std::optional<TensorNsOptions>& ns) {
  if (a.dim() != b.dim()) throw DomainError("tensor_spectrum_check: factor dimensions differ");
  const Region ra = Region::from_box(a);
  const Region rb = Region::from_box(b);
  require_no_cross_interaction(ra, rb, interaction);
  if (a.site_count() * b.site_count() > kDenseCap) {
    throw CapacityError("tensor_spectrum_check: product volume exceeds the dense cap");
  }
  const auto ha = assemble(a, g, potential, interaction);
  const auto hb = assemble(b, g, potential, interaction);
  const bool same = a.radius() == b.radius();
  const auto h = same ? assemble(product(a, b), g, potential, interaction)
                      : assemble(product(ra, rb), g, potential, interaction);
  const auto sa = spectrum(ha);
  const auto sb = spectrum(hb);

  TensorCheck out;
  out.size = h.size();
  out.deviation = sum_deviation(h, sa, sb);

  if (ns && same) {
    out.ns_checked = true;
    ClassifyOptions fo;
    fo.m = ns->m_factor;
    fo.beta = ns->beta;
    out.hypotheses_hold = true;
    for (double mb : sb.values) out.hypotheses_hold = out.hypotheses_hold && classify(ha, ns->E - mb, fo).ns;
    for (double la : sa.values) out.hypotheses_hold = out.hypotheses_hold && classify(hb, ns->E - la, fo).ns;
    ClassifyOptions ao;
    ao.m = ns->m_ambient;
    ao.beta = ns->beta;
    const auto c = classify(h, ns->E, ao);
    out.ambient_ns = c.ns;
    out.ambient_nr = c.nr;
  }
  return out;
}

}  // namespace msa
