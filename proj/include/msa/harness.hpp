#ifndef MSA_HARNESS_HPP
#define MSA_HARNESS_HPP

// Monte-Carlo layer: scale schedules, singularity / resonance frequencies with
// Wilson intervals, the induction step, two-particle event logs and the
// tensor-spectrum identity for non-interacting subsystems.
//
// Every trial draws its disorder from trial_seed(base_seed, t) and writes its
// record into slot t, so results do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "msa/disorder.hpp"
#include "msa/green.hpp"
#include "msa/hamiltonian.hpp"
#include "msa/lattice.hpp"

namespace msa {

struct ScaleSchedule {
  int L0 = 0;
  int k_max = 0;
  std::vector<int> scales;  // L_0, ..., L_{k_max}
};

/// L_{k+1} = floor(L_k^{3/2}), computed in integers. Throws DomainError when
/// L0 < 2 or the sequence stalls.
ScaleSchedule schedule(int L0, int k_max);

struct MassSequence {
  double m1 = 0.0;
  int L0 = 0;
  std::vector<double> values;  // m^(1), ..., m^(N)
};

/// m^(n) = m^(n-1) - L0^{-1/8}. Throws DomainError if m^(N) <= 0.
MassSequence mass_sequence(double m1, int L0, int N);

/// Wilson score interval for k successes in n trials; [0, 1] when n = 0.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};
inline constexpr double kWilsonZ95 = 1.959963984540054;
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = kWilsonZ95);

/// Single-particle law and coupling of the random operator.
struct ModelSpec {
  int d = 1;
  int N = 1;
  double g = 1.0;
  MarginalDistribution distribution = MarginalDistribution::uniform(-1.0, 1.0);
  std::optional<InteractionSpec> interaction;
  /// Overrides the random draw with V = constant everywhere.
  std::optional<double> constant_potential;

  /// No randomness reaches the operator (g = 0, a point-mass law or a
  /// constant potential).
  bool degenerate() const;
};

/// Disorder over every single-particle projection of `box`.
DisorderSample draw_potential(const ModelSpec& model, const Box& box, std::uint64_t seed);

/// H on `box` for the given trial seed.
Hamiltonian draw_hamiltonian(const ModelSpec& model, const Box& box, std::uint64_t seed);

struct HarnessOptions {
  double beta = 0.5;
  double p = 2.0;
  /// Scale of the CNR sub-cube test; 0 picks floor(L^{2/3}).
  int cnr_radius = 0;
  CnrScan scan = CnrScan::strided;
  ResolventOptions resolvent{};
  /// Largest number of sites a single trial may assemble.
  std::size_t site_budget = 250000;
  unsigned threads = 1;
};

/// floor(L^{2/3}), the default CNR scale.
int default_cnr_radius(int L);

struct TrialRecord {
  bool singular = false;
  bool resonant = false;
  bool cnr_fail = false;
  // Dichotomy diagnostics at a smaller scale ell (only when requested).
  bool not_cnr_ell = false;
  bool two_singular_ell = false;
};

struct ScaleReport {
  int L = 0;
  double E = 0.0;
  double m = 0.0;
  std::size_t trials = 0;
  std::size_t singular_count = 0;
  std::size_t resonant_count = 0;
  std::size_t cnr_fail_count = 0;
  bool p_defined = false;  // false when trials == 0
  double p_hat = 0.0;
  Interval ci{};
  double p = 0.0;
  double bound = 0.0;      // L^{-p}
  bool pass = false;       // ci.hi <= bound
  int cnr_radius = 0;
};

/// Aggregates per-trial records in trial order.
ScaleReport summarize(int L, double E, double m, const HarnessOptions& opts, int cnr_radius,
                      const std::vector<TrialRecord>& records);

/// Per-trial classification of Lambda_L(0). With dichotomy_ell > 0 each
/// record also carries the two dichotomy events at that scale.
std::vector<TrialRecord> run_trials(const ModelSpec& model, double E, double m, int L, std::size_t trials,
                                    std::uint64_t base_seed, const HarnessOptions& opts, int dichotomy_ell = 0);

ScaleReport estimate_ss(const ModelSpec& model, double E, double m, int L, std::size_t trials,
                        std::uint64_t base_seed, const HarnessOptions& opts = {});

struct WegnerReport {
  int L = 0;
  double E = 0.0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::size_t hits = 0;      // trials with dist(E, Sigma) <= epsilon
  bool p_defined = false;
  double p_hat = 0.0;
  Interval ci{};
  std::size_t volume = 0;
  double holder_constant = 0.0;
  double holder_exponent = 1.0;
  double standard_bound = 0.0;   // |Lambda| C (2 epsilon / |g|)^b, +inf for g = 0
  bool standard_holds = false;   // ci.lo <= standard_bound
  double beta = 0.5;
  double beta_prime = 0.25;
  double exp_threshold = 0.0;    // exp(-|Lambda|^beta)
  double exp_bound = 0.0;        // exp(-|Lambda|^beta')
  bool exp_applicable = false;   // epsilon <= exp_threshold
  bool exp_holds = false;        // ci.lo <= exp_bound when applicable
  std::optional<double> exact;   // closed form for a single site
};

struct WegnerOptions {
  double beta = 0.5;
  double beta_prime = 0.25;
  std::size_t dense_cap = kDenseCap;
  unsigned threads = 1;
};

/// P(dist(E, Sigma(H_{Lambda_L(0)})) <= epsilon) by dense eigensolves.
/// Throws CapacityError above the dense cap.
WegnerReport wegner_estimate(const ModelSpec& model, double E, int L, double epsilon, std::size_t trials,
                             std::uint64_t base_seed, const WegnerOptions& opts = {});

struct InductionStep {
  int L_from = 0;
  int L_to = 0;
  bool premise = false;     // scale L_from within its bound
  bool conclusion = false;  // scale L_to within its bound
  bool pass = false;        // premise implies conclusion
  bool vacuous = false;     // p <= 0: every bound is >= 1
  bool degenerate = false;  // no randomness; the frequencies are 0 or 1
  // Dichotomy at L_to with ell = L_from, counted over the singular trials.
  std::size_t singular_not_cnr = 0;
  std::size_t singular_two_disjoint = 0;
  std::size_t singular_unexplained = 0;  // singular, CNR, and at most one singular cluster
};

struct InductionReport {
  ScaleSchedule schedule;
  std::vector<ScaleReport> scales;
  std::vector<InductionStep> steps;
  bool pass = false;
};

InductionReport verify_induction(const ModelSpec& model, double E, double m, int L0, int k_max,
                                 std::size_t trials, std::uint64_t base_seed, const HarnessOptions& opts = {});

struct MpEventOptions {
  int L0 = 4;               // L_k; the ambient scale is floor(L_k^{3/2})
  LatticePoint center = LatticePoint::origin(2, 1);
  double E = 0.0;
  double m = 0.5;
  HarnessOptions harness{};
};

struct MpTrial {
  bool s_event = false;
  bool b_event = false;
  bool ambient_cnr = false;
  bool ambient_ns = false;
  bool dichotomy_violation = false;  // neither event, CNR, yet singular
  std::size_t near_diagonal_singular = 0;
};

struct MpEventReport {
  int L_small = 0;
  int L_large = 0;
  long r_threshold = 0;     // r_{N, L_small}
  long b_separation = 0;    // 9 (L_small + r_threshold)
  std::size_t trials = 0;
  std::size_t s_events = 0;
  std::size_t b_events = 0;
  std::size_t neither = 0;
  std::size_t dichotomy_violations = 0;
  // Independence audit over pairs of near-diagonal singular sub-boxes whose
  // projections are disjoint index by index: such pairs may still share a
  // site through different particle indices, which is counted here.
  std::size_t separated_pairs_checked = 0;
  std::size_t cross_overlap_pairs = 0;
  std::vector<MpTrial> log;
};

/// Event log for the two-particle induction step on Lambda_{L_{k+1}}(center).
/// Throws Error if two near-diagonal sub-boxes further apart than the B-event
/// separation share a disorder site.
MpEventReport mp_step_events(const ModelSpec& model, std::size_t trials, std::uint64_t base_seed,
                             const MpEventOptions& opts);

struct TensorNsOptions {
  double E = 0.0;
  double m_factor = 0.5;   // m^(N-1), used at the shifted energies
  double m_ambient = 0.5;  // m^(N)
  double beta = 0.5;
};

struct TensorCheck {
  double deviation = 0.0;  // max |sorted Sigma(H) - sorted {lambda_a + mu_b}|
  std::size_t size = 0;
  bool ns_checked = false;
  bool hypotheses_hold = false;  // every factor NS at every shifted energy
  bool ambient_ns = false;
  bool ambient_nr = false;
};

/// Compares the spectrum of the non-interacting operator on a' x a'' with the
/// pairwise sums of the factor spectra. Throws InteractionNonzeroError when
/// particles of the two factors come within a non-vanishing interaction range.
TensorCheck tensor_spectrum_check(const Box& a, const Box& b, double g, const DisorderSample& potential,
                                  const std::optional<InteractionSpec>& interaction = std::nullopt,
                                  const std::optional<TensorNsOptions>& ns = std::nullopt);

/// Region form: factors of any shape (for instance even-sized intervals),
/// spectrum comparison only.
TensorCheck tensor_spectrum_check(const Region& a, const Region& b, double g, const DisorderSample& potential,
                                  const std::optional<InteractionSpec>& interaction = std::nullopt);

/// Calls body(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; the first exception (lowest index) is rethrown.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace msa

#endif  // MSA_HARNESS_HPP
