#include "prfair/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "prfair/errors.hpp"

namespace prfair {

namespace {

struct ScanBest {
  bool found = false;
  double gain = 0.0;
  Rewiring rewiring{kNoNode, kNoNode, kNoNode};

  void challenge(double candidate_gain, const Rewiring& r) {
    // Strict improvement only: sources, arcs and targets are scanned in
    // ascending order, so the first maximum seen is the lexicographically
    // smallest tie.
    if (!found || candidate_gain > gain) {
      found = true;
      gain = candidate_gain;
      rewiring = r;
    }
  }
};

// Scans sources in [begin, end); Pi is column-major so the k loop walks
// one contiguous column.
void scan_range(const DirectedGraph& g, const PiMatrix& pi, const Vector& score_source,
                const Vector& eta, NodeId begin, NodeId end, ScanBest& best) {
  const Index n = g.node_count();
  const double alpha = pi.alpha;
  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(n), 0);
  for (NodeId i = begin; i < end; ++i) {
    const auto arcs = g.out(i);
    if (arcs.empty()) continue;
    for (const Arc& a : arcs) blocked[static_cast<std::size_t>(a.target)] = 1;
    blocked[static_cast<std::size_t>(i)] = 1;

    const double inv_degree = 1.0 / g.out_degree(i);
    const auto pi_col_i = pi.pi.col(i);
    for (const Arc& a : arcs) {
      const NodeId j = a.target;
      const double p_ij = a.weight * inv_degree;
      const double coeff = (1.0 - alpha) * p_ij * score_source(i);
      const double pi_ji = pi_col_i(j);
      const double eta_j = eta(j);
      for (NodeId k = 0; k < n; ++k) {
        if (blocked[static_cast<std::size_t>(k)]) continue;
        const double t = alpha + (1.0 - alpha) * p_ij * (pi_ji - pi_col_i(k));
        best.challenge(coeff * (eta(k) - eta_j) / t, Rewiring{i, j, k});
      }
    }

    for (const Arc& a : arcs) blocked[static_cast<std::size_t>(a.target)] = 0;
    blocked[static_cast<std::size_t>(i)] = 0;
  }
}

}  // namespace

std::optional<ExactScanResult> exact_scan(const DirectedGraph& g, const PiMatrix& pi,
                                          const Vector& score_source, const Vector& eta,
                                          int workers) {
  const Index n = g.node_count();
  workers = std::max(1, workers);
  if (workers == 1 || n < 4 * workers) {
    ScanBest best;
    scan_range(g, pi, score_source, eta, 0, static_cast<NodeId>(n), best);
    if (!best.found) return std::nullopt;
    return ExactScanResult{best.rewiring, best.gain};
  }

  std::vector<ScanBest> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  const Index chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const NodeId begin = static_cast<NodeId>(std::min<Index>(n, w * chunk));
    const NodeId end = static_cast<NodeId>(std::min<Index>(n, (w + 1) * chunk));
    threads.emplace_back([&, w, begin, end] {
      scan_range(g, pi, score_source, eta, begin, end, partial[static_cast<std::size_t>(w)]);
    });
  }
  for (auto& t : threads) t.join();

  // Chunks are ordered by source id, so a first-wins merge over exact
  // gains reproduces the serial lexicographic tie-break.
  ScanBest best;
  for (const ScanBest& p : partial)
    if (p.found) best.challenge(p.gain, p.rewiring);
  if (!best.found) return std::nullopt;
  return ExactScanResult{best.rewiring, best.gain};
}

namespace {

RewiringPlan run_exact(const DirectedGraph& g, const GroupPartition& group,
                       std::optional<NodeId> source, int budget, double alpha,
                       const ExactOptions& options) {
  if (budget < 1) throw ConfigError("budget must be at least 1");
  if (source && (*source < 0 || *source >= g.node_count()))
    throw ConfigError("source node out of range");

  PiMatrix pi = compute_pi(g, alpha, std::nullopt, options.dense_cap);
  DirectedGraph graph = g;

  RewiringPlan plan;
  plan.algorithm = source ? "exactv" : "exact";
  plan.alpha = alpha;
  plan.budget = budget;
  plan.source = source;
  plan.workers = std::max(1, options.workers);

  auto objective = [&](const PiMatrix& p) {
    if (source) return group_mass(p.pi.row(*source).transpose(), group);
    return group_mass(pagerank_vector(p), group);
  };
  auto organic = [&](double raw) {
    return (raw - (group.contains(*source) ? alpha : 0.0)) / (1.0 - alpha);
  };

  plan.initial_fairness = objective(pi);
  if (source) plan.organic_initial = organic(plan.initial_fairness);

  for (int round = 1; round <= budget; ++round) {
    const AuxVectors aux = aux_vectors(pi, group, source);
    const Vector& score = source ? *aux.sigma_tilde : aux.sigma;
    const auto best = exact_scan(graph, pi, score, aux.eta, plan.workers);
    if (!best)
      throw AlgorithmError("no legal rewiring exists at round " + std::to_string(round) +
                           "; completed " + std::to_string(round - 1) + " steps");

    sherman_morrison_update(pi, graph, best->rewiring);
    apply_rewiring(graph, best->rewiring);
    if (row_sum_drift(pi) > options.drift_tolerance)
      pi = compute_pi(graph, alpha, pi.jump, options.dense_cap);

    plan.steps.push_back({best->rewiring, best->gain, objective(pi), 0});
    if (!(best->gain > 0.0)) plan.nonpositive_rounds.push_back(round);
  }
  if (source) plan.organic_final = organic(plan.final_fairness());
  return plan;
}

}  // namespace

RewiringPlan exact_rewire(const DirectedGraph& g, const GroupPartition& group, int budget,
                          double alpha, const ExactOptions& options) {
  return run_exact(g, group, std::nullopt, budget, alpha, options);
}

RewiringPlan exactv_rewire(const DirectedGraph& g, const GroupPartition& group, NodeId source,
                           int budget, double alpha, const ExactOptions& options) {
  return run_exact(g, group, source, budget, alpha, options);
}

}  // namespace prfair
