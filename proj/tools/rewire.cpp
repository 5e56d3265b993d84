// Command-line entry point: audits, rewiring plans, correlation reports
// and sampling diagnostics over edge-list graphs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "prfair/errors.hpp"
#include "prfair/evaluation.hpp"
#include "prfair/experiment.hpp"
#include "prfair/fast.hpp"
#include "prfair/forest.hpp"
#include "prfair/greedy.hpp"
#include "prfair/io.hpp"
#include "prfair/pagerank.hpp"

namespace {

using namespace prfair;

struct CliConfig {
  std::string experiment_path;
  std::string algo;
  std::string graph_path;
  std::string group_path;
  bool symmetrize = false;
  double alpha = 0.15;
  int budget = 50;
  std::optional<std::int64_t> psi;
  std::optional<double> eps;
  std::optional<double> delta;
  std::string source_label;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  Index dense_cap = kDefaultDenseCap;
  std::optional<double> phi;
  std::string trajectory = "auto";
  Index sample_size = 5000;
  std::string out_plan;
  std::string out_summary;
  std::string out_labels;
  std::string out_report;
  std::string out_nodes;
  std::string out_pairs;
  std::string dump_pi;
  std::string dump_aux;
};

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << body;
}

void emit_report(const std::string& path, const nlohmann::json& j) {
  if (path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_text(path, j.dump(2) + "\n");
}

bool needs_source(const std::string& algo) { return algo == "exactv" || algo == "fastv"; }

bool is_randomized(const std::string& algo) {
  return algo == "fast" || algo == "fastv" || algo == "random" || algo == "correlate" ||
         algo == "sample-debug";
}

void validate(CliConfig& cfg) {
  static const std::vector<std::string> kAlgos{"exact",  "exactv",    "fast",        "fastv",
                                               "random", "audit",     "correlate",
                                               "sample-debug"};
  if (std::find(kAlgos.begin(), kAlgos.end(), cfg.algo) == kAlgos.end())
    throw ConfigError("unknown --algo '" + cfg.algo + "'");
  if (cfg.graph_path.empty()) throw ConfigError("--graph is required");
  if (cfg.group_path.empty() && cfg.algo != "sample-debug")
    throw ConfigError("--group is required");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < 1.0)) throw ConfigError("--alpha must lie in (0, 1)");
  if (cfg.budget < 1) throw ConfigError("--budget must be at least 1");
  if (cfg.psi && (cfg.eps || cfg.delta))
    throw ConfigError("set either --psi or --eps/--delta, not both");
  if (cfg.eps.has_value() != cfg.delta.has_value())
    throw ConfigError("--eps and --delta must be set together");
  if (needs_source(cfg.algo) && cfg.source_label.empty())
    throw ConfigError("--source is required with --algo " + cfg.algo);
  if (!needs_source(cfg.algo) && !cfg.source_label.empty())
    throw ConfigError("--source is only valid with exactv/fastv");
  if (cfg.eps) cfg.psi = required_samples(*cfg.eps, *cfg.delta);
  if ((cfg.algo == "fast" || cfg.algo == "fastv") && !cfg.psi)
    throw ConfigError("--algo " + cfg.algo + " requires --psi or --eps/--delta");
  if (is_randomized(cfg.algo) && !cfg.seed) {
    cfg.seed = std::random_device{}();
    std::cerr << "seed: " << *cfg.seed << "\n";
  }
  if (cfg.trajectory != "auto" && cfg.trajectory != "exact" && cfg.trajectory != "estimate")
    throw ConfigError("--trajectory must be auto, exact or estimate");
}

nlohmann::json config_echo(const CliConfig& cfg, const std::optional<NodeId>& source_index) {
  nlohmann::json j{{"algo", cfg.algo},
                   {"graph", cfg.graph_path},
                   {"group", cfg.group_path},
                   {"symmetrize", cfg.symmetrize},
                   {"alpha", cfg.alpha},
                   {"budget", cfg.budget},
                   {"workers", cfg.workers},
                   {"dense_cap", cfg.dense_cap},
                   {"trajectory", cfg.trajectory}};
  if (cfg.psi) j["psi"] = *cfg.psi;
  if (cfg.eps) {
    j["eps"] = *cfg.eps;
    j["delta"] = *cfg.delta;
  }
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (!cfg.source_label.empty()) {
    j["source"] = cfg.source_label;
    if (source_index) j["source_index"] = *source_index;
  }
  if (cfg.phi) j["phi"] = *cfg.phi;
  return j;
}

void write_labels(const std::string& path, const DirectedGraph& g) {
  std::ostringstream out;
  out << "id,label\n";
  for (Index i = 0; i < g.node_count(); ++i)
    out << i << ',' << g.label(static_cast<NodeId>(i)) << '\n';
  write_text(path, out.str());
}

void dump_dense_debug(const CliConfig& cfg, const DirectedGraph& g,
                      const GroupPartition& group, std::optional<NodeId> source) {
  if (cfg.dump_pi.empty() && cfg.dump_aux.empty()) return;
  const PiMatrix pi = compute_pi(g, cfg.alpha, std::nullopt, cfg.dense_cap);
  if (!cfg.dump_pi.empty()) {
    std::ostringstream out;
    write_matrix_csv(out, pi.pi);
    write_text(cfg.dump_pi, out.str());
  }
  if (!cfg.dump_aux.empty()) {
    const AuxVectors aux = aux_vectors(pi, group, source);
    std::ostringstream out;
    out << "node,sigma,eta";
    if (aux.sigma_tilde) out << ",sigma_tilde";
    out << '\n';
    for (Index i = 0; i < g.node_count(); ++i) {
      out << i << ',' << fmt_g(aux.sigma(i), 17) << ',' << fmt_g(aux.eta(i), 17);
      if (aux.sigma_tilde) out << ',' << fmt_g((*aux.sigma_tilde)(i), 17);
      out << '\n';
    }
    write_text(cfg.dump_aux, out.str());
  }
}

int run(CliConfig& cfg) {
  if (!cfg.experiment_path.empty()) {
    std::ifstream in(cfg.experiment_path);
    if (!in) throw DataError("cannot open experiment config '" + cfg.experiment_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("experiment config is not valid JSON: ") + e.what());
    }
    run_experiment(parse_experiment_config(j));
    return 0;
  }

  validate(cfg);
  const DirectedGraph graph = load_graph_file(cfg.graph_path, cfg.symmetrize);

  if (cfg.algo == "sample-debug") {
    RandomStream rng(derive_seed(cfg.seed.value_or(0), 0));
    const ForestSampler sampler(graph, cfg.alpha);
    const std::int64_t count = cfg.psi.value_or(10000);
    std::vector<std::vector<std::int64_t>> hist(
        static_cast<std::size_t>(graph.node_count()),
        std::vector<std::int64_t>(static_cast<std::size_t>(graph.node_count()), 0));
    ForestWorkspace ws;
    for (std::int64_t s = 0; s < count; ++s) {
      sampler.sample_into(rng, ws);
      for (std::size_t u = 0; u < ws.root.size(); ++u)
        ++hist[u][static_cast<std::size_t>(ws.root[u])];
    }
    std::ostringstream out;
    out << "node,root,count,frequency\n";
    for (std::size_t u = 0; u < hist.size(); ++u)
      for (std::size_t r = 0; r < hist[u].size(); ++r)
        if (hist[u][r] > 0)
          out << u << ',' << r << ',' << hist[u][r] << ','
              << fmt_g(static_cast<double>(hist[u][r]) / static_cast<double>(count)) << '\n';
    if (cfg.out_report.empty())
      std::cout << out.str();
    else
      write_text(cfg.out_report, out.str());
    return 0;
  }

  const GroupPartition group = load_group_file(graph, cfg.group_path, cfg.phi);
  std::optional<NodeId> source;
  if (!cfg.source_label.empty()) {
    source = graph.index_of(cfg.source_label);
    if (!source) throw DataError("unknown source node '" + cfg.source_label + "'");
  }
  dump_dense_debug(cfg, graph, group, source);

  if (cfg.algo == "audit") {
    AuditOptions opt;
    opt.dense_cap = cfg.dense_cap;
    opt.psi = cfg.psi;
    opt.seed = cfg.seed.value_or(0);
    opt.workers = cfg.workers;
    const AuditReport report = fairness_audit(graph, group, cfg.alpha, opt);
    nlohmann::json j{{"pi_S", report.pi_group},     {"r_S", report.ratio},
                     {"phi", report.phi},           {"unfair", report.unfair},
                     {"alpha", report.alpha},       {"estimated", report.estimated},
                     {"nodes", graph.node_count()}, {"arcs", graph.arc_count()},
                     {"config", config_echo(cfg, source)}};
    if (report.psi) j["psi"] = *report.psi;
    emit_report(cfg.out_report, j);
    if (!cfg.out_nodes.empty()) {
      std::ostringstream out;
      out << "node,label,organic_mass,in_group\n";
      for (Index v = 0; v < graph.node_count(); ++v)
        out << v << ',' << graph.label(static_cast<NodeId>(v)) << ','
            << fmt_g(report.organic_per_node(v)) << ','
            << (group.contains(static_cast<NodeId>(v)) ? 1 : 0) << '\n';
      write_text(cfg.out_nodes, out.str());
    }
    return 0;
  }

  if (cfg.algo == "correlate") {
    const CorrelationReport report = gain_correlation(graph, group, cfg.alpha, cfg.sample_size,
                                                      cfg.seed.value_or(0), cfg.dense_cap);
    nlohmann::json j{{"pearson", report.pearson},
                     {"spearman", report.spearman},
                     {"sample_size", cfg.sample_size},
                     {"config", config_echo(cfg, source)}};
    emit_report(cfg.out_report, j);
    if (!cfg.out_pairs.empty()) {
      std::ostringstream out;
      out << "delta,delta_hat\n";
      for (std::size_t t = 0; t < report.exact_gains.size(); ++t)
        out << fmt_g(report.exact_gains[t], 17) << ',' << fmt_g(report.approx_gains[t], 17)
            << '\n';
      write_text(cfg.out_pairs, out.str());
    }
    return 0;
  }

  // Plan-producing algorithms.
  RewiringPlan plan;
  if (cfg.algo == "exact") {
    plan = exact_rewire(graph, group, cfg.budget, cfg.alpha,
                        ExactOptions{cfg.dense_cap, cfg.workers});
  } else if (cfg.algo == "exactv") {
    plan = exactv_rewire(graph, group, *source, cfg.budget, cfg.alpha,
                         ExactOptions{cfg.dense_cap, cfg.workers});
  } else if (cfg.algo == "fast" || cfg.algo == "fastv") {
    FastOptions opt;
    opt.workers = cfg.workers;
    opt.dense_cap = cfg.dense_cap;
    if (cfg.trajectory == "exact") opt.trajectory = FastOptions::Trajectory::kExact;
    if (cfg.trajectory == "estimate") opt.trajectory = FastOptions::Trajectory::kEstimate;
    plan = cfg.algo == "fast"
               ? fast_rewire(graph, group, cfg.budget, *cfg.psi, cfg.alpha, *cfg.seed, opt)
               : fastv_rewire(graph, group, *source, cfg.budget, *cfg.psi, cfg.alpha,
                              *cfg.seed, opt);
  } else {  // random
    RandomBaselineOptions opt;
    opt.dense_cap = cfg.dense_cap;
    opt.psi = cfg.psi;
    opt.workers = cfg.workers;
    plan = random_baseline(graph, group, cfg.budget, cfg.alpha, *cfg.seed, opt);
  }

  const std::string plan_path =
      cfg.out_plan.empty() ? "plan_" + cfg.algo + ".csv" : cfg.out_plan;
  const std::string summary_path =
      cfg.out_summary.empty() ? "summary_" + cfg.algo + ".json" : cfg.out_summary;
  const std::string labels_path =
      cfg.out_labels.empty() ? plan_path + ".labels.csv" : cfg.out_labels;

  std::ostringstream csv;
  plan.write_csv(csv);
  write_text(plan_path, csv.str());
  write_labels(labels_path, graph);

  nlohmann::json summary = plan.summary();
  summary["config"] = config_echo(cfg, source);
  summary["outputs"] = {{"plan", plan_path}, {"labels", labels_path}};
  write_text(summary_path, summary.dump(2) + "\n");
  std::cout << "final fairness " << fmt_g(plan.final_fairness()) << " (initial "
            << fmt_g(plan.initial_fairness) << ") after " << plan.steps.size()
            << " rewirings; plan written to " << plan_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank fairness maximization by edge rewiring"};
  CliConfig cfg;

  if (const char* env = std::getenv("PRFAIR_WORKERS")) cfg.workers = std::atoi(env);
  if (cfg.workers < 1) cfg.workers = 1;

  app.add_option("--experiment", cfg.experiment_path,
                 "Run a declarative experiment from a JSON config (ignores other flags)");
  app.add_option("--algo", cfg.algo,
                 "exact|exactv|fast|fastv|random|audit|correlate|sample-debug");
  app.add_option("--graph", cfg.graph_path, "Edge-list file: 'src dst [weight]'");
  app.add_option("--group", cfg.group_path, "Group file: one node label per line");
  app.add_flag("--symmetrize", cfg.symmetrize, "Expand each input line to both arcs");
  app.add_option("--alpha", cfg.alpha, "Restart probability (default 0.15)");
  app.add_option("--budget", cfg.budget, "Number of rewirings b (default 50)");
  std::int64_t psi_flag = -1;
  app.add_option("--psi", psi_flag, "Forest samples per round");
  double eps_flag = -1.0, delta_flag = -1.0;
  app.add_option("--eps", eps_flag, "Hoeffding accuracy (with --delta, resolves psi)");
  app.add_option("--delta", delta_flag, "Hoeffding failure probability");
  app.add_option("--source", cfg.source_label, "Source node label (exactv/fastv)");
  std::int64_t seed_flag = -1;
  app.add_option("--seed", seed_flag, "RNG seed (generated and printed if omitted)");
  app.add_option("--workers", cfg.workers, "Worker threads (env PRFAIR_WORKERS)");
  std::int64_t cap_flag = -1;
  app.add_option("--dense-cap", cap_flag, "Dense-algebra node cap (default 20000)");
  double phi_flag = -1.0;
  app.add_option("--phi", phi_flag, "Fairness threshold (default r(S))");
  app.add_option("--trajectory", cfg.trajectory, "Fairness trajectory: auto|exact|estimate");
  app.add_option("--sample-size", cfg.sample_size, "Rewirings to sample for correlate");
  app.add_option("--out-plan", cfg.out_plan, "Plan CSV path");
  app.add_option("--out-summary", cfg.out_summary, "Summary JSON path");
  app.add_option("--out-labels", cfg.out_labels, "Node id/label mapping CSV path");
  app.add_option("--out-report", cfg.out_report, "Report path (audit/correlate/sample-debug)");
  app.add_option("--out-nodes", cfg.out_nodes, "Per-node audit CSV path");
  app.add_option("--out-pairs", cfg.out_pairs, "Sampled (delta, delta_hat) CSV path");
  app.add_option("--dump-pi", cfg.dump_pi, "Debug dump of the dense Pi matrix (CSV)");
  app.add_option("--dump-aux", cfg.dump_aux, "Debug dump of sigma/eta vectors (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (psi_flag >= 0) cfg.psi = psi_flag;
    if (eps_flag >= 0.0) cfg.eps = eps_flag;
    if (delta_flag >= 0.0) cfg.delta = delta_flag;
    if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
    if (cap_flag >= 0) cfg.dense_cap = cap_flag;
    if (phi_flag >= 0.0) cfg.phi = phi_flag;
    if (cfg.experiment_path.empty() && cfg.algo.empty())
      throw ConfigError("either --algo or --experiment is required");
    return run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error[data]: " << e.what() << "\n";
    return 3;
  } catch (const AlgorithmError& e) {
    std::cerr << "error[algorithm]: " << e.what() << "\n";
    return 4;
  } catch (const InternalError& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 5;
  }
}
