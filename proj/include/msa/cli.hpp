#ifndef MSA_CLI_HPP
#define MSA_CLI_HPP

// Run configuration and subcommand dispatch behind the msa-forge binary.
//
// A run is one JSON config file plus command-line overrides; overrides win.
// Exit codes: 0 success, 2 configuration error, 3 capacity error, 4 failed
// verification (verify-* subcommands), 1 anything else.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "msa/harness.hpp"
#include "msa/json_io.hpp"

namespace msa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitVerify = 4;

struct BoxSpec {
  std::vector<int> center;
  int radius = 1;
};

struct ImplicationSpec {
  int ell = 1;
  int A = 4;
};

struct WegnerCase {
  double energy = 0.0;
  double epsilon = 0.0;
};

struct RunConfig {
  ModelSpec model;
  double energy = 0.0;
  std::optional<double> mass;
  std::optional<double> mass_m1;  // mass_sequence inputs
  std::optional<int> mass_L0;
  int L0 = 8;
  int k_max = 1;
  double beta = 0.5;
  double p = 2.0;
  CnrScan cnr_scan = CnrScan::strided;
  int cnr_radius = 0;
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::string format = "json";
  std::string out_path;
  unsigned threads = 1;

  std::optional<BoxSpec> box;                 // classify
  std::optional<ImplicationSpec> implication; // classify
  int wegner_L = 1;
  std::vector<WegnerCase> wegner_cases;       // empty: (energy, wegner_epsilon)
  double wegner_epsilon = 0.0;
  double beta_prime = 0.25;
  std::size_t gri_instances = 100;
  double gri_tolerance = 1e-10;
  std::size_t descent_instances = 500;
  int mp_L0 = 4;
  std::optional<std::vector<int>> mp_center;
  bool mp_log = false;
  std::optional<BoxSpec> spectrum_a;          // mp-spectrum
  std::optional<BoxSpec> spectrum_b;
  bool spectrum_ns = false;

  /// m for the classification: m^(N) of the mass sequence when given.
  double effective_mass() const;
  MassSequence masses() const;
};

/// Throws ConfigError on unknown fields (naming them), wrong types or
/// out-of-range values.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

struct GriSuiteReport {
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::size_t inequality_failures = 0;
  std::size_t resonant_redraws = 0;
  double max_relative_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Randomized resolvent-identity instances: d in {1, 2}, inner radius in
/// {2, 3}, ambient radius in 5..8, g in {0, 2, 5}.
GriSuiteReport run_gri_suite(std::size_t instances, std::uint64_t base_seed, double tolerance);

/// Random subharmonic function generator used by the descent suite. The
/// returned instance passes verify_subharmonic and has supported geometry.
SubharmonicInstance random_subharmonic(std::uint64_t seed, DescentCase wanted);

struct DescentSuiteReport {
  std::size_t instances = 0;
  std::size_t no_singular = 0;
  std::size_t boundary_adjacent = 0;
  std::size_t interior = 0;
  std::size_t violations = 0;
  std::size_t literal_violations = 0;
  double max_ratio = 0.0;  // largest center_value / bound
  bool pass = false;
};

DescentSuiteReport run_descent_suite(std::size_t instances, std::uint64_t base_seed);

struct RunResult {
  std::string text;
  int status = kExitOk;
};

/// Runs one subcommand and renders its artifact (JSON or CSV).
RunResult execute(const std::string& subcommand, const RunConfig& cfg);

/// execute() plus error mapping; writes the artifact to cfg.out_path or `out`
/// and diagnostics to `err`.
int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err);

const std::vector<std::string>& subcommands();

}  // namespace msa

#endif  // MSA_CLI_HPP
