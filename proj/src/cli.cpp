#include "msa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "msa/descent.hpp"
#include "msa/errors.hpp"
#include "msa/green.hpp"

namespace msa {

namespace {

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError("unknown field \"" + k + "\" in " + where);
    }
  }
}

template <typename T>
T get(const Json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::detail::exception&) {
    throw ConfigError(where + "." + key + " is missing or has the wrong type");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

BoxSpec parse_box(const Json& j, const std::string& where) {
  only_keys(j, where, {"center", "radius"});
  BoxSpec b{get<std::vector<int>>(j, "center", where), get<int>(j, "radius", where)};
  require(b.radius >= 1 && b.radius <= 10000, where + ".radius must be in [1, 10000]");
  return b;
}

MarginalDistribution parse_distribution(const Json& j) {
  const std::string where = "model.distribution";
  const auto kind = get<std::string>(j, "kind", where);
  try {
    if (kind == "uniform") {
      only_keys(j, where, {"kind", "a", "b"});
      return MarginalDistribution::uniform(get<double>(j, "a", where), get<double>(j, "b", where));
    }
    if (kind == "piecewise_linear") {
      only_keys(j, where, {"kind", "t", "F"});
      return MarginalDistribution::piecewise_linear(get<std::vector<double>>(j, "t", where),
                                                    get<std::vector<double>>(j, "F", where));
    }
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ".kind must be \"uniform\" or \"piecewise_linear\"");
}

LatticePoint point_for(const std::vector<int>& coords, const RunConfig& cfg, const std::string& where) {
  require(coords.size() == static_cast<std::size_t>(cfg.model.N * cfg.model.d),
          where + " needs N * d = " + std::to_string(cfg.model.N * cfg.model.d) + " coordinates");
  return LatticePoint(coords, cfg.model.N, cfg.model.d);
}

HarnessOptions harness_options(const RunConfig& cfg) {
  HarnessOptions h;
  h.beta = cfg.beta;
  h.p = cfg.p;
  h.cnr_radius = cfg.cnr_radius;
  h.scan = cfg.cnr_scan;
  h.threads = cfg.threads;
  return h;
}

Json model_json(const RunConfig& cfg) {
  Json j;
  j["d"] = cfg.model.d;
  j["N"] = cfg.model.N;
  j["g"] = cfg.model.g;
  j["distribution"] = to_json(cfg.model.distribution);
  if (cfg.model.interaction) {
    j["interaction"] = {{"r0", cfg.model.interaction->range()}, {"u0", (*cfg.model.interaction)(0)}};
  }
  if (cfg.model.constant_potential) j["constant_potential"] = *cfg.model.constant_potential;
  return j;
}

Json header(const std::string& sub, const RunConfig& cfg) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["subcommand"] = sub;
  j["model"] = model_json(cfg);
  j["base_seed"] = cfg.base_seed;
  return j;
}

// Gauss-Seidel sweeps f(u) <- min(f(u), q max_nb f) until nothing moves.
void lower_to_subharmonic(SubharmonicInstance& inst) {
  const Box& dom = inst.domain;
  const std::set<LatticePoint> singular(inst.singular.begin(), inst.singular.end());
  std::vector<std::pair<Eigen::Index, std::vector<Eigen::Index>>> rules;
  for (std::size_t i = 0; i < dom.site_count(); ++i) {
    const auto u = dom.site(i);
    long lo = inst.ell;
    long hi = inst.ell;
    if (singular.contains(u)) {
      hi = static_cast<long>(inst.A) * inst.ell - 1;
    } else if (dom.radius() - 1 - sup_distance(u, dom.center()) < inst.ell) {
      continue;
    }
    std::vector<Eigen::Index> nb;
    const Box around(u, static_cast<int>(hi) + 1);
    for (std::size_t k = 0; k < around.site_count(); ++k) {
      const auto y = around.site(k);
      if (sup_distance(y, u) >= lo && dom.contains(y)) nb.push_back(static_cast<Eigen::Index>(*dom.index_of(y)));
    }
    rules.emplace_back(static_cast<Eigen::Index>(i), std::move(nb));
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (const auto& [i, nb] : rules) {
      double best = 0.0;
      for (auto k : nb) best = std::max(best, inst.f[k]);
      const double cap = inst.q * best;
      if (inst.f[i] > cap) {
        inst.f[i] = cap;
        moved = true;
      }
    }
  }
}

void require_csv_free(const RunConfig& cfg, const std::string& sub) {
  if (cfg.format == "csv") throw ConfigError("csv output is only available for mc and induct, not " + sub);
}

}  // namespace

// ---------------------------------------------------------------------------

double RunConfig::effective_mass() const {
  if (mass_m1) return masses().values.back();
  return *mass;
}

MassSequence RunConfig::masses() const {
  if (mass_m1) return mass_sequence(*mass_m1, *mass_L0, model.N);
  return MassSequence{*mass, 0, std::vector<double>(static_cast<std::size_t>(model.N), *mass)};
}

RunConfig parse_config(const Json& j) {
  only_keys(j, "config", {"model", "energy", "mass", "mass_sequence", "schedule", "classification", "trials",
                          "base_seed", "output", "box", "implication", "wegner", "gri", "descent", "mp",
                          "spectrum"});
  RunConfig c;

  require(j.contains("model"), "config.model is required");
  const Json& m = j.at("model");
  only_keys(m, "model", {"d", "N", "g", "distribution", "interaction", "potential"});
  c.model.d = get_or<int>(m, "d", 1, "model");
  c.model.N = get_or<int>(m, "N", 1, "model");
  c.model.g = get_or<double>(m, "g", 1.0, "model");
  require(c.model.d >= 1 && c.model.d <= 3, "model.d must be in [1, 3]");
  require(c.model.N >= 1 && c.model.N <= 3, "model.N must be in [1, 3]");
  require(std::isfinite(c.model.g), "model.g must be finite");
  if (m.contains("distribution")) c.model.distribution = parse_distribution(m.at("distribution"));
  if (m.contains("interaction")) {
    const Json& u = m.at("interaction");
    only_keys(u, "model.interaction", {"r0", "u0"});
    const int r0 = get<int>(u, "r0", "model.interaction");
    require(r0 >= 0 && r0 <= 1000, "model.interaction.r0 must be in [0, 1000]");
    c.model.interaction = InteractionSpec::step(get<double>(u, "u0", "model.interaction"), r0);
  }
  if (m.contains("potential")) {
    const Json& v = m.at("potential");
    only_keys(v, "model.potential", {"constant"});
    c.model.constant_potential = get<double>(v, "constant", "model.potential");
  }

  c.energy = get_or<double>(j, "energy", 0.0, "config");
  require(std::isfinite(c.energy), "energy must be finite");
  if (j.contains("mass")) {
    c.mass = get<double>(j, "mass", "config");
    require(*c.mass > 0.0, "mass must be positive");
  }
  if (j.contains("mass_sequence")) {
    const Json& s = j.at("mass_sequence");
    only_keys(s, "mass_sequence", {"m1", "L0"});
    c.mass_m1 = get<double>(s, "m1", "mass_sequence");
    c.mass_L0 = get<int>(s, "L0", "mass_sequence");
    try {
      (void)c.masses();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("mass_sequence: ") + e.what());
    }
  }
  require(c.mass.has_value() != c.mass_m1.has_value(), "exactly one of mass and mass_sequence is required");

  if (j.contains("schedule")) {
    const Json& s = j.at("schedule");
    only_keys(s, "schedule", {"L0", "k_max"});
    c.L0 = get_or<int>(s, "L0", c.L0, "schedule");
    c.k_max = get_or<int>(s, "k_max", c.k_max, "schedule");
    require(c.L0 >= 1 && c.k_max >= 0 && c.k_max <= 6, "schedule needs L0 >= 1 and k_max in [0, 6]");
  }
  if (j.contains("classification")) {
    const Json& s = j.at("classification");
    only_keys(s, "classification", {"beta", "p", "cnr_scan", "cnr_radius"});
    c.beta = get_or<double>(s, "beta", c.beta, "classification");
    c.p = get_or<double>(s, "p", c.p, "classification");
    const auto scan = get_or<std::string>(s, "cnr_scan", "strided", "classification");
    require(scan == "strided" || scan == "exhaustive", "classification.cnr_scan must be strided or exhaustive");
    c.cnr_scan = scan == "exhaustive" ? CnrScan::exhaustive : CnrScan::strided;
    c.cnr_radius = get_or<int>(s, "cnr_radius", 0, "classification");
    require(c.beta > 0.0 && c.beta < 1.0, "classification.beta must be in (0, 1)");
    require(std::isfinite(c.p), "classification.p must be finite");
    require(c.cnr_radius >= 0, "classification.cnr_radius must be non-negative");
  }
  if (j.contains("trials")) {
    const auto t = get<std::int64_t>(j, "trials", "config");
    require(t >= 0 && t <= 10'000'000, "trials must be in [0, 10^7]");
    c.trials = static_cast<std::size_t>(t);
  }
  c.base_seed = get_or<std::uint64_t>(j, "base_seed", c.base_seed, "config");
  if (j.contains("output")) {
    const Json& o = j.at("output");
    only_keys(o, "output", {"format", "path"});
    c.format = get_or<std::string>(o, "format", c.format, "output");
    c.out_path = get_or<std::string>(o, "path", c.out_path, "output");
  }
  require(c.format == "json" || c.format == "csv", "output.format must be json or csv");

  if (j.contains("box")) c.box = parse_box(j.at("box"), "box");
  if (j.contains("implication")) {
    const Json& s = j.at("implication");
    only_keys(s, "implication", {"ell", "A"});
    c.implication = ImplicationSpec{get<int>(s, "ell", "implication"), get_or<int>(s, "A", 4, "implication")};
    require(c.implication->ell >= 1 && c.implication->A >= 2, "implication needs ell >= 1 and A >= 2");
  }
  if (j.contains("wegner")) {
    const Json& s = j.at("wegner");
    only_keys(s, "wegner", {"L", "epsilon", "beta_prime", "cases"});
    c.wegner_L = get_or<int>(s, "L", 1, "wegner");
    c.wegner_epsilon = get_or<double>(s, "epsilon", 0.0, "wegner");
    c.beta_prime = get_or<double>(s, "beta_prime", c.beta_prime, "wegner");
    if (s.contains("cases")) {
      require(s.at("cases").is_array(), "wegner.cases must be an array");
      for (const auto& k : s.at("cases")) {
        only_keys(k, "wegner.cases[]", {"energy", "epsilon"});
        c.wegner_cases.push_back({get<double>(k, "energy", "wegner.cases[]"), get<double>(k, "epsilon", "wegner.cases[]")});
        require(c.wegner_cases.back().epsilon >= 0.0, "wegner epsilon must be non-negative");
      }
    }
    require(c.wegner_L >= 1 && c.wegner_epsilon >= 0.0, "wegner needs L >= 1 and epsilon >= 0");
    require(c.beta_prime > 0.0 && c.beta_prime < 1.0, "wegner.beta_prime must be in (0, 1)");
  }
  if (j.contains("gri")) {
    const Json& s = j.at("gri");
    only_keys(s, "gri", {"instances", "tolerance"});
    c.gri_instances = get_or<std::size_t>(s, "instances", c.gri_instances, "gri");
    c.gri_tolerance = get_or<double>(s, "tolerance", c.gri_tolerance, "gri");
    require(c.gri_tolerance > 0.0, "gri.tolerance must be positive");
  }
  if (j.contains("descent")) {
    const Json& s = j.at("descent");
    only_keys(s, "descent", {"instances"});
    c.descent_instances = get_or<std::size_t>(s, "instances", c.descent_instances, "descent");
  }
  if (j.contains("mp")) {
    const Json& s = j.at("mp");
    only_keys(s, "mp", {"L0", "center", "log"});
    c.mp_L0 = get_or<int>(s, "L0", c.mp_L0, "mp");
    if (s.contains("center")) c.mp_center = get<std::vector<int>>(s, "center", "mp");
    c.mp_log = get_or<bool>(s, "log", false, "mp");
    require(c.mp_L0 >= 2, "mp.L0 must be at least 2");
  }
  if (j.contains("spectrum")) {
    const Json& s = j.at("spectrum");
    only_keys(s, "spectrum", {"a", "b", "check_ns"});
    require(s.contains("a") && s.contains("b"), "spectrum needs boxes a and b");
    c.spectrum_a = parse_box(s.at("a"), "spectrum.a");
    c.spectrum_b = parse_box(s.at("b"), "spectrum.b");
    c.spectrum_ns = get_or<bool>(s, "check_ns", false, "spectrum");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::detail::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------

GriSuiteReport run_gri_suite(std::size_t instances, std::uint64_t base_seed, double tolerance) {
  GriSuiteReport r;
  r.instances = instances;
  r.tolerance = tolerance;
  const double couplings[] = {0.0, 2.0, 5.0};
  for (std::size_t i = 0; i < instances; ++i) {
    std::mt19937_64 rng(trial_seed(base_seed, i));
    const int d = 1 + static_cast<int>(i % 2);
    const int ell = 2 + static_cast<int>(rng() % 2);
    const int L = 5 + static_cast<int>(rng() % 4);
    const double g = couplings[rng() % 3];
    const Box ambient(LatticePoint::origin(1, d), L);
    const Box centers(ambient.center(), L - ell + 1);
    const Box inner(centers.site(rng() % centers.site_count()), ell);
    std::vector<LatticePoint> outside;
    for (std::size_t k = 0; k < ambient.site_count(); ++k) {
      if (!inner.contains(ambient.site(k))) outside.push_back(ambient.site(k));
    }
    const auto y = outside[rng() % outside.size()];
    ModelSpec model;
    model.d = d;
    model.g = g;
    const auto h = draw_hamiltonian(model, ambient, rng());
    std::uniform_real_distribution<double> energy(-2.0 * d - g, 2.0 * d + g);
    for (int attempt = 0;; ++attempt) {
      try {
        const auto res = gri_check(h, inner, energy(rng), y);
        r.max_relative_residual = std::max(r.max_relative_residual, res.relative_residual);
        if (!(res.relative_residual <= tolerance)) ++r.failures;
        if (!(std::abs(res.lhs) <= res.inequality_bound * (1.0 + 1e-12))) ++r.inequality_failures;
        break;
      } catch (const ResonantEnergyError&) {
        ++r.resonant_redraws;
        if (attempt > 50) throw;
      }
    }
  }
  r.pass = r.failures == 0 && r.inequality_failures == 0;
  return r;
}

SubharmonicInstance random_subharmonic(std::uint64_t seed, DescentCase wanted) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int d = rng() % 5 == 0 ? 2 : 1;
    const int ell = 2 + static_cast<int>(rng() % (d == 1 ? 3 : 2));
    const int A = 2 + static_cast<int>(rng() % 3);
    const int span = d == 1 ? 36 : 10;
    const int L = ell + 1 + static_cast<int>(rng() % static_cast<unsigned>(span));
    SubharmonicInstance inst{Box(LatticePoint::origin(1, d), L), {}, ell, 0.05 + 0.85 * unit(rng), {}, A};
    const Box& dom = inst.domain;

    if (wanted != DescentCase::no_singular) {
      // a cluster of diameter <= A ell - 1 around a random anchor
      const int half = (A * ell - 1) / 2;
      std::vector<LatticePoint> pool;
      const long collar = static_cast<long>(L) - static_cast<long>(A + 1) * ell;
      for (std::size_t k = 0; k < dom.site_count(); ++k) {
        const auto x = dom.site(k);
        const bool in_collar = sup_distance(x, dom.center()) >= collar;
        if ((wanted == DescentCase::boundary_adjacent) == in_collar) pool.push_back(x);
      }
      if (pool.empty()) continue;
      const auto anchor = pool[rng() % pool.size()];
      const Box near(anchor, half + 1);
      const std::size_t want = 1 + rng() % 3;
      std::set<LatticePoint> chosen{anchor};
      for (std::size_t tries = 0; chosen.size() < want && tries < 20; ++tries) {
        const auto x = near.site(rng() % near.site_count());
        if (!dom.contains(x)) continue;
        if (wanted == DescentCase::boundary_adjacent && sup_distance(x, dom.center()) < collar) continue;
        chosen.insert(x);
      }
      inst.singular.assign(chosen.begin(), chosen.end());
    }

    const bool flat = rng() % 2 == 0;  // f = 1 start gives the extremal function
    inst.f = Eigen::VectorXd(static_cast<Eigen::Index>(dom.site_count()));
    for (Eigen::Index k = 0; k < inst.f.size(); ++k) inst.f[k] = flat ? 1.0 : unit(rng);

    lower_to_subharmonic(inst);
    if (!verify_subharmonic(inst).pass) continue;
    const auto dc = check_descent(inst);
    if (!dc.supported || dc.kind != wanted) continue;
    return inst;
  }
}

DescentSuiteReport run_descent_suite(std::size_t instances, std::uint64_t base_seed) {
  DescentSuiteReport r;
  r.instances = instances;
  const DescentCase cases[] = {DescentCase::no_singular, DescentCase::boundary_adjacent, DescentCase::interior};
  for (std::size_t i = 0; i < instances; ++i) {
    const auto inst = random_subharmonic(trial_seed(base_seed, i), cases[i % 3]);
    const auto dc = check_descent(inst);
    switch (dc.kind) {
      case DescentCase::no_singular: ++r.no_singular; break;
      case DescentCase::boundary_adjacent: ++r.boundary_adjacent; break;
      case DescentCase::interior: ++r.interior; break;
    }
    r.violations += !dc.holds;
    r.literal_violations += !dc.literal_holds;
    if (dc.bound > 0.0) r.max_ratio = std::max(r.max_ratio, dc.center_value / dc.bound);
  }
  r.pass = r.violations == 0;
  return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"classify",    "mc",         "wegner",     "induct",
                                              "mp-events",   "mp-spectrum", "verify-gri", "verify-descent"};
  return names;
}

RunResult execute(const std::string& sub, const RunConfig& cfg) {
  RunResult out;
  Json j = header(sub, cfg);
  const double m = cfg.effective_mass();
  j["energy"] = cfg.energy;
  j["mass"] = m;

  if (sub == "classify") {
    require_csv_free(cfg, sub);
    require(cfg.box.has_value(), "classify needs a box section");
    const Box box(point_for(cfg.box->center, cfg, "box.center"), cfg.box->radius);
    const auto h = draw_hamiltonian(cfg.model, box, cfg.base_seed);
    ClassifyOptions co;
    co.m = m;
    co.beta = cfg.beta;
    co.cnr_radius = cfg.cnr_radius;
    co.scan = cfg.cnr_scan;
    j["box"] = to_json(box);
    j["classification"] = to_json(classify(h, cfg.energy, co));
    if (cfg.implication) {
      NsImplicationOptions no;
      no.m = m;
      no.beta = cfg.beta;
      no.ell = cfg.implication->ell;
      no.A = cfg.implication->A;
      no.scan = cfg.cnr_scan;
      j["implication"] = to_json(ns_implication(h, cfg.energy, no));
    }
  } else if (sub == "mc") {
    const auto sched = schedule(cfg.L0, cfg.k_max);
    std::vector<ScaleReport> reports;
    for (int L : sched.scales) {
      reports.push_back(estimate_ss(cfg.model, cfg.energy, m, L, cfg.trials, cfg.base_seed, harness_options(cfg)));
    }
    if (cfg.format == "csv") {
      out.text = scale_csv(reports);
      return out;
    }
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    j["reports"] = std::move(arr);
  } else if (sub == "wegner") {
    require_csv_free(cfg, sub);
    auto cases = cfg.wegner_cases;
    if (cases.empty()) cases.push_back({cfg.energy, cfg.wegner_epsilon});
    WegnerOptions wo;
    wo.beta = cfg.beta;
    wo.beta_prime = cfg.beta_prime;
    wo.threads = cfg.threads;
    Json arr = Json::array();
    for (const auto& c : cases) {
      arr.push_back(to_json(wegner_estimate(cfg.model, c.energy, cfg.wegner_L, c.epsilon, cfg.trials, cfg.base_seed, wo)));
    }
    j["reports"] = std::move(arr);
  } else if (sub == "induct") {
    const auto rep = verify_induction(cfg.model, cfg.energy, m, cfg.L0, cfg.k_max, cfg.trials, cfg.base_seed,
                                      harness_options(cfg));
    if (cfg.format == "csv") {
      out.text = scale_csv(rep.scales);
      return out;
    }
    j["induction"] = to_json(rep);
  } else if (sub == "mp-events") {
    require_csv_free(cfg, sub);
    MpEventOptions mo;
    mo.L0 = cfg.mp_L0;
    mo.center = cfg.mp_center ? point_for(*cfg.mp_center, cfg, "mp.center") : LatticePoint::origin(cfg.model.N, cfg.model.d);
    mo.E = cfg.energy;
    mo.m = m;
    mo.harness = harness_options(cfg);
    j["events"] = to_json(mp_step_events(cfg.model, cfg.trials, cfg.base_seed, mo), cfg.mp_log);
  } else if (sub == "mp-spectrum") {
    require_csv_free(cfg, sub);
    require(cfg.spectrum_a && cfg.spectrum_b, "mp-spectrum needs a spectrum section");
    require(cfg.spectrum_a->center.size() % static_cast<std::size_t>(cfg.model.d) == 0 &&
                cfg.spectrum_b->center.size() % static_cast<std::size_t>(cfg.model.d) == 0,
            "spectrum box centers must have a multiple of d coordinates");
    const int na = static_cast<int>(cfg.spectrum_a->center.size()) / cfg.model.d;
    const int nb = static_cast<int>(cfg.spectrum_b->center.size()) / cfg.model.d;
    const Box a(LatticePoint(cfg.spectrum_a->center, na, cfg.model.d), cfg.spectrum_a->radius);
    const Box b(LatticePoint(cfg.spectrum_b->center, nb, cfg.model.d), cfg.spectrum_b->radius);
    // potential over both factors' particle sites
    std::set<LatticePoint> sites;
    for (const Box* box : {&a, &b}) {
      for (int k = 0; k < box->particles(); ++k) {
        const Box pk = box->projection(k);
        for (std::size_t i = 0; i < pk.site_count(); ++i) sites.insert(pk.site(i));
      }
    }
    const std::vector<LatticePoint> list(sites.begin(), sites.end());
    const auto v = cfg.model.constant_potential ? DisorderSample::constant(list, *cfg.model.constant_potential)
                                                : sample(cfg.model.distribution, cfg.base_seed, list);
    std::optional<TensorNsOptions> ns;
    if (cfg.spectrum_ns) {
      const auto seq = cfg.masses();
      const std::size_t n = seq.values.size();
      ns = TensorNsOptions{cfg.energy, n >= 2 ? seq.values[n - 2] : seq.values.back(), seq.values.back(), cfg.beta};
    }
    const auto t = tensor_spectrum_check(a, b, cfg.model.g, v, cfg.model.interaction, ns);
    j["a"] = to_json(a);
    j["b"] = to_json(b);
    j["tensor"] = to_json(t);
    j["tolerance"] = 1e-9;
    j["pass"] = t.deviation <= 1e-9;
  } else if (sub == "verify-gri") {
    require_csv_free(cfg, sub);
    const auto r = run_gri_suite(cfg.gri_instances, cfg.base_seed, cfg.gri_tolerance);
    j["instances"] = r.instances;
    j["tolerance"] = r.tolerance;
    j["max_relative_residual"] = r.max_relative_residual;
    j["failures"] = r.failures;
    j["inequality_failures"] = r.inequality_failures;
    j["resonant_redraws"] = r.resonant_redraws;
    j["pass"] = r.pass;
    if (!r.pass) out.status = kExitVerify;
  } else if (sub == "verify-descent") {
    require_csv_free(cfg, sub);
    const auto r = run_descent_suite(cfg.descent_instances, cfg.base_seed);
    j["instances"] = r.instances;
    j["no_singular"] = r.no_singular;
    j["boundary_adjacent"] = r.boundary_adjacent;
    j["interior"] = r.interior;
    j["violations"] = r.violations;
    j["literal_violations"] = r.literal_violations;
    j["max_ratio"] = r.max_ratio;
    j["pass"] = r.pass;
    if (!r.pass) out.status = kExitVerify;
  } else {
    throw ConfigError("unknown subcommand \"" + sub + "\"");
  }
  out.text = canonical_dump(j);
  return out;
}

int run(const std::string& sub, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto result = execute(sub, cfg);
    if (cfg.out_path.empty()) {
      out << result.text;
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write " + cfg.out_path);
      file << result.text;
    }
    if (result.status == kExitVerify) err << "msa-forge: " << sub << ": verification failed\n";
    return result.status;
  } catch (const ConfigError& e) {
    err << "msa-forge: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "msa-forge: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "msa-forge: capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "msa-forge: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace msa
