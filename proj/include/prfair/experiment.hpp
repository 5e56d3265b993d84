#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prfair/types.hpp"

namespace prfair {

/// Declarative experiment: one graph/group, a set of algorithms, shared
/// parameters. Produces per-algorithm plans, a long-format results CSV
/// (round,algorithm,metric,value,seed) and a manifest echoing the
/// configuration.
struct ExperimentConfig {
  std::string graph_path;
  std::string group_path;
  bool symmetrize = false;
  double alpha = 0.15;
  int budget = 50;
  std::optional<std::int64_t> psi;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  int workers = 1;
  Index dense_cap = 20000;
  std::vector<std::string> algorithms;      // subset of {exact, fast, random}
  bool ppr_enabled = false;
  double ppr_source_fraction = 0.1;
  std::vector<std::string> ppr_algorithms;  // subset of {exactv, fastv}
  std::string output_dir = ".";
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Runs the experiment, writes plan CSVs, summaries, results.csv and
/// manifest.json under output_dir, and returns the manifest.
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace prfair
