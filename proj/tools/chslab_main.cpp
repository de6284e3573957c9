#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chslab/config.hpp"
#include "chslab/experiment.hpp"
#include "chslab/version.hpp"

namespace {

std::string usage_footer() {
  std::string text = "Experiments and their results.csv schemas:\n\n";
  text += chslab::experiment::experiment_help();
  text +=
      "Every run writes manifest.json (resolved config + seed, never the\n"
      "worker count) and report.json (checks with measured values). Rerunning\n"
      "with --config <manifest.json> reproduces the output byte for byte.\n"
      "\n"
      "Exit codes: 0 pass, 2 check failed, 3 trajectory blow-up, 64 usage,\n"
      "73 output directory not writable.\n";
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("chslab ") + chslab::kVersion +
               " - spectral laboratory for a conservative stochastic "
               "Cahn-Hilliard equation"};
  app.footer(usage_footer());

  std::string experiment;
  std::string config_file;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<std::string> overrides;

  app.add_option("experiment", experiment, "experiment name")->required();
  app.add_option("--config", config_file,
                 "TOML config or a manifest.json from a previous run");
  auto* seed_opt = app.add_option("--seed", seed, "base RNG seed");
  auto* workers_opt =
      app.add_option("--workers", workers, "parallel workers (default 1)");
  app.add_option("--out", out_dir, "output directory (default .)");
  app.add_option("overrides", overrides, "key=value config overrides");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n' << app.help();
    return chslab::experiment::kExitUsage;
  }

  chslab::experiment::ExperimentSpec spec;
  spec.name = experiment;
  spec.out_dir = out_dir;

  try {
    if (!config_file.empty()) {
      chslab::config::LoadedConfig loaded =
          chslab::config::load_config_file(config_file);
      spec.values = std::move(loaded.values);
      if (loaded.seed) spec.seed = *loaded.seed;
    }
    for (const std::string& kv : overrides)
      chslab::config::apply_override(spec.values, kv);
  } catch (const chslab::config::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return chslab::experiment::kExitUsage;
  }

  // Precedence: --seed flag, then a seed=... key, then a manifest's seed.
  if (!seed_opt->empty()) {
    spec.seed = seed;
  } else if (auto it = spec.values.find("seed"); it != spec.values.end()) {
    if (const std::int64_t* v = std::get_if<std::int64_t>(&it->second)) {
      spec.seed = static_cast<std::uint64_t>(*v);
    } else {
      std::cerr << "seed must be an integer\n";
      return chslab::experiment::kExitUsage;
    }
  }
  spec.values.erase("seed");

  spec.workers = 1;
  if (!workers_opt->empty()) {
    spec.workers = workers;
  } else if (auto it = spec.values.find("workers"); it != spec.values.end()) {
    if (const std::int64_t* v = std::get_if<std::int64_t>(&it->second))
      spec.workers = static_cast<int>(*v);
  }
  spec.values.erase("workers");
  if (spec.workers < 1) {
    std::cerr << "--workers must be >= 1\n";
    return chslab::experiment::kExitUsage;
  }

  return chslab::experiment::run(spec);
}
