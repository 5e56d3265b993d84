#include "prfair/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "prfair/errors.hpp"
#include "prfair/evaluation.hpp"
#include "prfair/fast.hpp"
#include "prfair/forest.hpp"
#include "prfair/greedy.hpp"
#include "prfair/io.hpp"

namespace prfair {

namespace {

struct ResultRow {
  int round;
  std::string algorithm;
  std::string metric;
  double value;
  std::uint64_t seed;
};

Vector group_eta(const DirectedGraph& g, const GroupPartition& group,
                 const ExperimentConfig& cfg) {
  if (g.node_count() <= cfg.dense_cap) {
    Matrix system = (-(1.0 - cfg.alpha)) * transition_matrix(g);
    system.diagonal().array() += 1.0;
    Vector rhs = Vector::Zero(g.node_count());
    for (NodeId s : group.members()) rhs(s) = cfg.alpha;
    return system.partialPivLu().solve(rhs);
  }
  if (!cfg.psi)
    throw ConfigError("ppr evaluation above the dense cap requires psi (or eps/delta)");
  return estimate_aux(ForestSampler(g, cfg.alpha), *cfg.psi, group, std::nullopt,
                      derive_seed(cfg.seed, 424243), EstimatorOptions{cfg.workers})
      .eta;
}

// Wasserstein distance between the group-mass distributions of the two
// sides; the S side uses the organic ratio pi-bar_i(S), the T side raw
// pi_i(S).
double ppr_gap(const DirectedGraph& g, const GroupPartition& group,
               const ExperimentConfig& cfg) {
  const Vector eta = group_eta(g, group, cfg);
  std::vector<double> side_s, side_t;
  for (Index v = 0; v < g.node_count(); ++v) {
    if (group.contains(static_cast<NodeId>(v)))
      side_s.push_back((eta(v) - cfg.alpha) / (1.0 - cfg.alpha));
    else
      side_t.push_back(eta(v));
  }
  return wasserstein_1d(side_s, side_t);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << body;
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.graph_path = j.at("graph").get<std::string>();
    cfg.group_path = j.at("group").get<std::string>();
    cfg.symmetrize = j.value("symmetrize", false);
    cfg.alpha = j.value("alpha", 0.15);
    cfg.budget = j.value("budget", 50);
    if (j.contains("psi")) cfg.psi = j.at("psi").get<std::int64_t>();
    if (j.contains("eps")) cfg.epsilon = j.at("eps").get<double>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    cfg.seed = j.value("seed", 0ULL);
    cfg.workers = j.value("workers", 1);
    cfg.dense_cap = j.value("dense_cap", static_cast<Index>(20000));
    cfg.algorithms = j.value("algorithms", std::vector<std::string>{});
    if (j.contains("ppr")) {
      const auto& p = j.at("ppr");
      cfg.ppr_enabled = p.value("enabled", true);
      cfg.ppr_source_fraction = p.value("source_fraction", 0.1);
      cfg.ppr_algorithms = p.value("algorithms", std::vector<std::string>{});
    }
    cfg.output_dir = j.value("output_dir", std::string("."));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid experiment config: ") + e.what());
  }
  if (cfg.psi && (cfg.epsilon || cfg.delta))
    throw ConfigError("set either psi or eps/delta, not both");
  if (cfg.epsilon.has_value() != cfg.delta.has_value())
    throw ConfigError("eps and delta must be set together");
  for (const auto& a : cfg.algorithms)
    if (a != "exact" && a != "fast" && a != "random")
      throw ConfigError("unknown algorithm '" + a + "' (expected exact, fast or random)");
  for (const auto& a : cfg.ppr_algorithms)
    if (a != "exactv" && a != "fastv")
      throw ConfigError("unknown ppr algorithm '" + a + "' (expected exactv or fastv)");
  return cfg;
}

nlohmann::json run_experiment(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  if (cfg.epsilon) cfg.psi = required_samples(*cfg.epsilon, *cfg.delta);

  const DirectedGraph graph = load_graph_file(cfg.graph_path, cfg.symmetrize);
  const GroupPartition group = load_group_file(graph, cfg.group_path);
  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path out_dir(cfg.output_dir);

  std::vector<ResultRow> rows;
  std::vector<std::string> written;

  auto emit_plan = [&](const RewiringPlan& plan) {
    std::ostringstream csv;
    plan.write_csv(csv);
    const std::string plan_name = "plan_" + plan.algorithm + ".csv";
    write_file(out_dir / plan_name, csv.str());
    write_file(out_dir / ("summary_" + plan.algorithm + ".json"), plan.summary().dump(2) + "\n");
    written.push_back(plan_name);
    rows.push_back({0, plan.algorithm, "pr_fairness", plan.initial_fairness, cfg.seed});
    for (std::size_t t = 0; t < plan.steps.size(); ++t)
      rows.push_back({static_cast<int>(t) + 1, plan.algorithm, "pr_fairness",
                      plan.steps[t].fairness_after, cfg.seed});
  };

  std::optional<double> exact_final;
  for (const std::string& algo : cfg.algorithms) {
    if (algo == "exact") {
      const auto plan = exact_rewire(graph, group, cfg.budget, cfg.alpha,
                                     ExactOptions{cfg.dense_cap, cfg.workers});
      exact_final = plan.final_fairness();
      emit_plan(plan);
    } else if (algo == "fast") {
      if (!cfg.psi) throw ConfigError("algorithm 'fast' requires psi or eps/delta");
      FastOptions opt;
      opt.workers = cfg.workers;
      opt.dense_cap = cfg.dense_cap;
      emit_plan(fast_rewire(graph, group, cfg.budget, *cfg.psi, cfg.alpha, cfg.seed, opt));
    } else {
      RandomBaselineOptions opt;
      opt.dense_cap = cfg.dense_cap;
      opt.psi = cfg.psi;
      opt.workers = cfg.workers;
      emit_plan(random_baseline(graph, group, cfg.budget, cfg.alpha, cfg.seed, opt));
    }
  }
  if (exact_final) {
    for (const ResultRow& row : std::vector<ResultRow>(rows))
      if (row.metric == "pr_fairness" && row.round == cfg.budget && row.algorithm != "exact")
        rows.push_back({cfg.budget, row.algorithm, "relative_error_pct",
                        relative_error(row.value, *exact_final), cfg.seed});
  }

  if (cfg.ppr_enabled && !cfg.ppr_algorithms.empty()) {
    const Index n = graph.node_count();
    const auto source_count =
        std::max<Index>(1, static_cast<Index>(std::ceil(cfg.ppr_source_fraction *
                                                        static_cast<double>(n))));
    std::vector<NodeId> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), NodeId{0});
    RandomStream picker(derive_seed(cfg.seed, 777));
    for (Index t = 0; t < source_count; ++t) {
      const auto swap_with =
          t + static_cast<Index>(picker.bounded(static_cast<std::uint64_t>(n - t)));
      std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(swap_with)]);
    }
    pool.resize(static_cast<std::size_t>(source_count));

    for (const std::string& algo : cfg.ppr_algorithms) {
      std::vector<double> gap_sum(static_cast<std::size_t>(cfg.budget) + 1, 0.0);
      for (NodeId source : pool) {
        RewiringPlan plan;
        if (algo == "exactv") {
          plan = exactv_rewire(graph, group, source, cfg.budget, cfg.alpha,
                               ExactOptions{cfg.dense_cap, cfg.workers});
        } else {
          if (!cfg.psi) throw ConfigError("algorithm 'fastv' requires psi or eps/delta");
          FastOptions opt;
          opt.workers = cfg.workers;
          opt.dense_cap = cfg.dense_cap;
          plan = fastv_rewire(graph, group, source, cfg.budget, *cfg.psi, cfg.alpha,
                              cfg.seed, opt);
        }
        DirectedGraph replay = graph;
        gap_sum[0] += ppr_gap(replay, group, cfg);
        for (std::size_t t = 0; t < plan.steps.size(); ++t) {
          apply_rewiring(replay, plan.steps[t].rewiring);
          gap_sum[t + 1] += ppr_gap(replay, group, cfg);
        }
      }
      for (std::size_t round = 0; round < gap_sum.size(); ++round)
        rows.push_back({static_cast<int>(round), algo, "w1_ppr_ratio",
                        gap_sum[round] / static_cast<double>(pool.size()), cfg.seed});
    }
  }

  std::ostringstream results;
  results << "round,algorithm,metric,value,seed\n";
  for (const ResultRow& row : rows)
    results << row.round << ',' << row.algorithm << ',' << row.metric << ','
            << fmt_g(row.value) << ',' << row.seed << '\n';
  write_file(out_dir / "results.csv", results.str());

  nlohmann::json manifest{
      {"graph", cfg.graph_path},
      {"group", cfg.group_path},
      {"symmetrize", cfg.symmetrize},
      {"alpha", cfg.alpha},
      {"budget", cfg.budget},
      {"seed", cfg.seed},
      {"workers", cfg.workers},
      {"dense_cap", cfg.dense_cap},
      {"algorithms", cfg.algorithms},
      {"nodes", graph.node_count()},
      {"arcs", graph.arc_count()},
      {"group_size", group.size()},
      {"ppr_ratio_convention", {{"s_side", "organic"}, {"t_side", "raw"}}},
      {"outputs", written},
  };
  if (cfg.psi) manifest["psi"] = *cfg.psi;
  if (cfg.epsilon) {
    manifest["eps"] = *cfg.epsilon;
    manifest["delta"] = *cfg.delta;
  }
  if (cfg.ppr_enabled) {
    manifest["ppr"] = {{"enabled", true},
                       {"source_fraction", cfg.ppr_source_fraction},
                       {"algorithms", cfg.ppr_algorithms}};
  }
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace prfair
