#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chslab/config.hpp"

namespace chslab::experiment {

struct ExperimentSpec {
  std::string name;
  config::ConfigMap values;  // overrides on top of the experiment's defaults
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int workers = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitBlowUp = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitCantWrite = 73;

std::vector<std::string> experiment_names();

// One paragraph per experiment: what it measures and its results.csv schema.
// Stable text, surfaced by the CLI's --help.
std::string experiment_help();

// Runs the named experiment and writes manifest.json, report.json and (for
// most experiments) results.csv into spec.out_dir. The manifest records the
// fully resolved configuration and seed, but never the worker count, so a
// rerun from the manifest is byte-identical regardless of parallelism.
int run(const ExperimentSpec& spec);

}  // namespace chslab::experiment
