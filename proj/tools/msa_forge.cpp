#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "msa/cli.hpp"
#include "msa/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"msa-forge: multiscale analysis experiments for lattice Anderson models"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<unsigned> threads;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;

  for (const auto& name : msa::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "base seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : msa::kExitConfig;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  msa::RunConfig cfg;
  try {
    cfg = msa::load_config(config_path);
  } catch (const msa::ConfigError& e) {
    std::cerr << "msa-forge: config error: " << e.what() << '\n';
    return msa::kExitConfig;
  }

  // precedence: flag, then MSA_FORGE_THREADS, then hardware concurrency
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MSA_FORGE_THREADS")) {
    try {
      cfg.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      std::cerr << "msa-forge: config error: MSA_FORGE_THREADS is not a number\n";
      return msa::kExitConfig;
    }
  }
  if (threads) cfg.threads = *threads;
  if (cfg.threads == 0) cfg.threads = 1;
  if (out_path) cfg.out_path = *out_path;
  if (format) cfg.format = *format;
  if (seed) cfg.base_seed = *seed;

  return msa::run(name, cfg, std::cout, std::cerr);
}
