#include "msa/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace msa {

namespace {

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(v, out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        emit(v, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

Json count(std::size_t n) { return Json(static_cast<std::uint64_t>(n)); }

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

const char* to_string(DescentCase kind) {
  switch (kind) {
    case DescentCase::no_singular: return "no_singular";
    case DescentCase::boundary_adjacent: return "boundary_adjacent";
    case DescentCase::interior: return "interior";
  }
  return "unknown";
}

Json to_json(const LatticePoint& x) {
  Json a = Json::array();
  for (int c : x.coords()) a.push_back(c);
  return a;
}

Json to_json(const Box& b) {
  Json j;
  j["center"] = to_json(b.center());
  j["radius"] = b.radius();
  j["particles"] = b.particles();
  j["dim"] = b.dim();
  j["sites"] = count(b.site_count());
  return j;
}

Json to_json(const MarginalDistribution& dist) {
  Json j;
  if (dist.kind() == MarginalDistribution::Kind::uniform) {
    j["kind"] = "uniform";
    j["a"] = dist.support_min();
    j["b"] = dist.support_max();
  } else {
    j["kind"] = "piecewise_linear";
    j["t"] = dist.knots();
    j["F"] = dist.cdf_values();
  }
  return j;
}

Json to_json(const Interval& ci) {
  Json j;
  j["lo"] = ci.lo;
  j["hi"] = ci.hi;
  return j;
}

Json to_json(const Classification& c) {
  Json j;
  j["ns"] = c.ns;
  j["nr"] = c.nr;
  j["cnr"] = c.cnr;
  j["resonant"] = c.resonant;
  j["m"] = c.m;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma_value;
  j["ns_threshold"] = std::exp(-c.gamma_value);
  j["boundary_max"] = c.boundary_max;
  j["margin"] = c.margin;
  return j;
}

Json to_json(const ScaleReport& r) {
  Json j;
  j["L"] = r.L;
  j["E"] = r.E;
  j["m"] = r.m;
  j["trials"] = count(r.trials);
  j["singular"] = count(r.singular_count);
  j["resonant"] = count(r.resonant_count);
  j["cnr_fail"] = count(r.cnr_fail_count);
  j["cnr_radius"] = r.cnr_radius;
  j["p_defined"] = r.p_defined;
  j["p_hat"] = r.p_hat;
  j["ci"] = to_json(r.ci);
  j["p"] = r.p;
  j["bound"] = r.bound;
  j["pass"] = r.pass;
  return j;
}

Json to_json(const WegnerReport& r) {
  Json j;
  j["L"] = r.L;
  j["E"] = r.E;
  j["epsilon"] = r.epsilon;
  j["trials"] = count(r.trials);
  j["hits"] = count(r.hits);
  j["p_defined"] = r.p_defined;
  j["p_hat"] = r.p_hat;
  j["ci"] = to_json(r.ci);
  j["volume"] = count(r.volume);
  j["holder_constant"] = r.holder_constant;
  j["holder_exponent"] = r.holder_exponent;
  j["standard_bound"] = r.standard_bound;
  j["standard_holds"] = r.standard_holds;
  j["beta"] = r.beta;
  j["beta_prime"] = r.beta_prime;
  j["exp_threshold"] = r.exp_threshold;
  j["exp_bound"] = r.exp_bound;
  j["exp_applicable"] = r.exp_applicable;
  j["exp_holds"] = r.exp_holds;
  j["exact"] = r.exact ? Json(*r.exact) : Json(nullptr);
  if (r.exact) j["exact_in_ci"] = r.ci.lo <= *r.exact && *r.exact <= r.ci.hi;
  return j;
}

Json to_json(const InductionReport& r) {
  Json j;
  j["scales"] = r.schedule.scales;
  Json reports = Json::array();
  for (const auto& s : r.scales) reports.push_back(to_json(s));
  j["reports"] = std::move(reports);
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json k;
    k["L_from"] = s.L_from;
    k["L_to"] = s.L_to;
    k["premise"] = s.premise;
    k["conclusion"] = s.conclusion;
    k["pass"] = s.pass;
    k["vacuous"] = s.vacuous;
    k["degenerate"] = s.degenerate;
    k["singular_not_cnr"] = count(s.singular_not_cnr);
    k["singular_two_disjoint"] = count(s.singular_two_disjoint);
    k["singular_unexplained"] = count(s.singular_unexplained);
    steps.push_back(std::move(k));
  }
  j["steps"] = std::move(steps);
  j["pass"] = r.pass;
  return j;
}

Json to_json(const MpEventReport& r, bool with_log) {
  Json j;
  j["L_small"] = r.L_small;
  j["L_large"] = r.L_large;
  j["r_threshold"] = r.r_threshold;
  j["b_separation"] = r.b_separation;
  j["trials"] = count(r.trials);
  j["s_events"] = count(r.s_events);
  j["b_events"] = count(r.b_events);
  j["neither"] = count(r.neither);
  j["dichotomy_violations"] = count(r.dichotomy_violations);
  j["separated_pairs_checked"] = count(r.separated_pairs_checked);
  j["cross_overlap_pairs"] = count(r.cross_overlap_pairs);
  if (with_log) {
    Json log = Json::array();
    for (const auto& t : r.log) {
      Json k;
      k["event"] = t.s_event ? (t.b_event ? "S+B" : "S") : (t.b_event ? "B" : "neither");
      k["near_diagonal_singular"] = count(t.near_diagonal_singular);
      k["ambient_cnr"] = t.ambient_cnr;
      k["ambient_ns"] = t.ambient_ns;
      k["dichotomy_violation"] = t.dichotomy_violation;
      log.push_back(std::move(k));
    }
    j["log"] = std::move(log);
  }
  return j;
}

Json to_json(const TensorCheck& t) {
  Json j;
  j["size"] = count(t.size);
  j["deviation"] = t.deviation;
  j["ns_checked"] = t.ns_checked;
  if (t.ns_checked) {
    j["hypotheses_hold"] = t.hypotheses_hold;
    j["ambient_ns"] = t.ambient_ns;
    j["ambient_nr"] = t.ambient_nr;
  }
  return j;
}

Json to_json(const GriResult& g) {
  Json j;
  j["lhs"] = g.lhs;
  j["rhs"] = g.rhs;
  j["residual"] = g.residual;
  j["relative_residual"] = g.relative_residual;
  j["inequality_bound"] = g.inequality_bound;
  j["slack"] = g.slack;
  j["edge_pairs"] = count(g.edge_pairs);
  j["outer_size"] = count(g.outer_size);
  return j;
}

Json to_json(const DescentCheck& c) {
  Json j;
  j["supported"] = c.supported;
  if (!c.supported) {
    j["reason"] = c.unsupported_reason;
    return j;
  }
  j["kind"] = to_string(c.kind);
  j["r"] = c.r;
  j["induction_stopped"] = c.induction_stopped;
  j["center_value"] = c.center_value;
  j["sup"] = c.sup;
  j["exponent"] = c.exponent;
  j["bound"] = c.bound;
  j["holds"] = c.holds;
  j["literal_exponent"] = c.literal_exponent;
  j["literal_bound"] = c.literal_bound;
  j["literal_holds"] = c.literal_holds;
  return j;
}

Json to_json(const NsVerdict& v) {
  Json j;
  j["implied"] = v.implied;
  j["reason"] = to_string(v.reason);
  j["detail"] = v.detail;
  Json s = Json::array();
  for (const auto& x : v.singular_centers) s.push_back(to_json(x));
  j["singular_centers"] = std::move(s);
  j["q_tilde"] = v.factors.q_tilde;
  j["q"] = v.factors.q;
  j["norm"] = v.norm;
  j["bound"] = v.bound;
  j["target"] = v.target;
  j["log_bound"] = v.log_bound;
  j["log_target"] = v.log_target;
  j["kind"] = v.kind ? Json(to_string(*v.kind)) : Json(nullptr);
  j["exponent"] = v.exponent;
  j["induction_stopped"] = v.induction_stopped;
  j["decay_checked"] = v.decay_checked;
  if (v.decay_checked) {
    j["decay_holds"] = v.decay_holds;
    j["decay_rhs"] = v.decay_rhs;
  }
  return j;
}

std::string scale_csv(const std::vector<ScaleReport>& reports) {
  std::ostringstream os;
  os << "L,E,m,trials,singular,resonant,p_hat,ci_lo,ci_hi,bound,pass\n";
  for (const auto& r : reports) {
    os << r.L << ',' << format_double(r.E) << ',' << format_double(r.m) << ',' << r.trials << ','
       << r.singular_count << ',' << r.resonant_count << ',' << (r.p_defined ? format_double(r.p_hat) : "") << ','
       << format_double(r.ci.lo) << ',' << format_double(r.ci.hi) << ',' << format_double(r.bound) << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace msa
