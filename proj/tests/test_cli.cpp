#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "json.hpp"
#include "msa/cli.hpp"

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

std::string env(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, name << " is not set");
  return v;
}

std::string fixture(const std::string& name) { return env("MSA_FORGE_FIXTURES") + "/" + name; }

// Runs the binary with stderr folded into the captured output.
Outcome forge(const std::string& args) {
  const std::string cmd = env("MSA_FORGE_BIN") + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

nlohmann::ordered_json parse(const Outcome& o) { return nlohmann::ordered_json::parse(o.out); }

}  // namespace

TEST_CASE("classify the single-site fixture") {
  auto o = forge("classify --config " + fixture("classify_single_site.json"));
  REQUIRE(o.status == 0);
  auto j = parse(o);
  CHECK(j["schema"] == 1);
  CHECK(j["subcommand"] == "classify");
  CHECK(j["classification"]["ns"] == false);
  CHECK(j["classification"]["boundary_max"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("classify with an implication section") {
  auto o = forge("classify --config " + fixture("implication_singular.json"));
  REQUIRE(o.status == 0);
  auto j = parse(o);
  CHECK(j["implication"]["implied"] == true);
  CHECK(j["implication"]["singular_centers"].size() == 1);
  CHECK(j["classification"]["ns"] == true);
}

TEST_CASE("mc") {
  auto o = forge("mc --config " + fixture("strong_disorder.json"));
  REQUIRE(o.status == 0);
  auto j = parse(o);
  CHECK(j["subcommand"] == "mc");
  // one report per scale of the schedule
  REQUIRE(j["reports"].size() == 2);
  CHECK(j["reports"][0]["trials"] == 500);
  CHECK(j["reports"][0]["L"] == 8);
  CHECK(j["reports"][1]["L"] == 22);
}

TEST_CASE("induct as csv") {
  auto o = forge("induct --format csv --config " + fixture("strong_disorder.json"));
  REQUIRE(o.status == 0);
  std::istringstream in(o.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "L,E,m,trials,singular,resonant,p_hat,ci_lo,ci_hi,bound,pass");
  CHECK(lines[1].rfind("8,", 0) == 0);
  CHECK(lines[2].rfind("22,", 0) == 0);
}

TEST_CASE("wegner") {
  auto o = forge("wegner --config " + fixture("wegner_single_site.json"));
  REQUIRE(o.status == 0);
  auto j = parse(o);
  REQUIRE(j["reports"].size() == 3);
  for (const auto& r : j["reports"]) CHECK(r["exact_in_ci"] == true);
}

TEST_CASE("mp-events") {
  auto o = forge("mp-events --config " + fixture("mp_events.json"));
  REQUIRE(o.status == 0);
  auto j = parse(o);
  CHECK(j["events"]["trials"] == 20);
  CHECK(j["events"]["dichotomy_violations"] == 0);
  CHECK(j["events"]["log"].size() == 20);
}

TEST_CASE("mp-spectrum") {
  auto o = forge("mp-spectrum --config " + fixture("mp_spectrum.json"));
  REQUIRE(o.status == 0);
  auto j = parse(o);
  CHECK(j["tensor"]["deviation"].get<double>() <= 1e-9);
  CHECK(j["tensor"]["ns_checked"] == true);
}

TEST_CASE("verify subcommands") {
  auto g = forge("verify-gri --config " + fixture("verify_gri.json"));
  CHECK(g.status == 0);
  CHECK(parse(g)["pass"] == true);
  auto d = forge("verify-descent --config " + fixture("verify_descent.json"));
  CHECK(d.status == 0);
  CHECK(parse(d)["violations"] == 0);
}

TEST_CASE("unknown field") {
  auto o = forge("classify --config " + fixture("bad_unknown_field.json"));
  CHECK(o.status == 2);
  CHECK(o.out.find("\"foo\"") != std::string::npos);
}

TEST_CASE("missing config and bad format") {
  CHECK(forge("classify --config /nonexistent.json").status == 2);
  CHECK(forge("classify --format csv --config " + fixture("classify_single_site.json")).status == 2);
}

TEST_CASE("flags override the config and reruns are byte-identical") {
  const std::string args = "wegner --config " + fixture("wegner_single_site.json");
  auto a = forge(args + " --threads 1");
  auto b = forge(args + " --threads 4");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  auto c = forge(args + " --seed 8");
  CHECK(parse(c)["base_seed"] == 8);
  CHECK(c.out != a.out);
}

TEST_CASE("config parsing") {
  auto cfg = msa::parse_config(nlohmann::ordered_json::parse(R"({
    "model": {"d": 1, "N": 2, "g": 10, "distribution": {"kind": "uniform", "a": -1, "b": 1}},
    "mass_sequence": {"m1": 1.0, "L0": 4},
    "trials": 3
  })"));
  CHECK(cfg.model.N == 2);
  CHECK(cfg.effective_mass() == doctest::Approx(1.0 - std::pow(4.0, -0.125)));
  CHECK_THROWS_AS(msa::parse_config(nlohmann::ordered_json::parse(R"({"trials": -1})")), msa::ConfigError);
  CHECK_THROWS_AS(msa::parse_config(nlohmann::ordered_json::parse(R"({"model": {"bar": 1}})")),
                  msa::ConfigError);
}
