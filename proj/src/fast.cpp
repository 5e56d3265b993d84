#include "prfair/fast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "prfair/errors.hpp"

namespace prfair {

CandidateSet candidate_targets(const Vector& eta, const DirectedGraph& g) {
  if (eta.size() != g.node_count())
    throw ConfigError("eta vector length does not match node count");
  CandidateSet set;
  set.ranked.resize(static_cast<std::size_t>(g.node_count()));
  std::iota(set.ranked.begin(), set.ranked.end(), NodeId{0});
  std::sort(set.ranked.begin(), set.ranked.end(), [&](NodeId a, NodeId b) {
    return eta(a) != eta(b) ? eta(a) > eta(b) : a < b;
  });
  set.base_size = std::min<Index>(g.node_count(), g.max_out_count() + 2);
  return set;
}

NodeId CandidateSet::best_target(const DirectedGraph& g, NodeId i, Index* depth_out) const {
  for (std::size_t t = 0; t < ranked.size(); ++t) {
    const NodeId k = ranked[t];
    if (k == i || g.has_arc(i, k)) continue;
    if (depth_out) *depth_out = std::max<Index>(base_size, static_cast<Index>(t) + 1);
    return k;
  }
  if (depth_out) *depth_out = static_cast<Index>(ranked.size());
  return kNoNode;
}

NodeId CandidateSet::min_id_target(const DirectedGraph& g, NodeId i) const {
  Index effective = base_size;
  NodeId first = best_target(g, i, &effective);
  if (first == kNoNode) return kNoNode;
  NodeId min_id = first;
  for (Index t = 0; t < effective; ++t) {
    const NodeId k = ranked[static_cast<std::size_t>(t)];
    if (k == i || k >= min_id || g.has_arc(i, k)) continue;
    min_id = k;
  }
  return min_id;
}

std::optional<FastSelection> select_rewiring(const DirectedGraph& g, const Vector& score_source,
                                             const Vector& eta, const CandidateSet& candidates,
                                             double alpha) {
  const Index n = g.node_count();
  bool found = false;
  FastSelection best;
  Index max_depth = candidates.base_size;

  for (NodeId i = 0; i < n; ++i) {
    const auto arcs = g.out(i);
    if (arcs.empty()) continue;
    const double s_i = score_source(i);

    // Per-source candidate: the score depends on k only through eta_k, so
    // one ranked scan serves every arc out of i. Zero-coefficient sources
    // score 0 for every target; the smallest-id legal node in the
    // effective prefix is the lexicographic representative.
    NodeId k = kNoNode;
    Index depth = candidates.base_size;
    if (s_i > 0.0) {
      k = candidates.best_target(g, i, &depth);
    } else {
      k = candidates.min_id_target(g, i);
    }
    if (k == kNoNode) continue;
    max_depth = std::max(max_depth, depth);

    const double coeff = (1.0 - alpha) * s_i / g.out_degree(i);
    for (const Arc& a : arcs) {
      const double score = s_i > 0.0 ? coeff * a.weight * (eta(k) - eta(a.target)) : 0.0;
      if (!found || score > best.score) {
        found = true;
        best.score = score;
        best.rewiring = Rewiring{i, a.target, k};
      }
    }
  }
  if (!found) return std::nullopt;
  best.effective_candidates = max_depth;
  return best;
}

namespace {

RewiringPlan run_fast(const DirectedGraph& g, const GroupPartition& group,
                      std::optional<NodeId> source, int budget, std::int64_t psi, double alpha,
                      std::uint64_t seed, const FastOptions& options) {
  if (budget < 1) throw ConfigError("budget must be at least 1");
  if (psi < 1) throw ConfigError("psi must be at least 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (source && (*source < 0 || *source >= g.node_count()))
    throw ConfigError("source node out of range");

  DirectedGraph graph = g;
  const Index n = graph.node_count();
  const bool exact_trajectory =
      options.trajectory == FastOptions::Trajectory::kExact ||
      (options.trajectory == FastOptions::Trajectory::kAuto && n <= options.dense_cap);

  RewiringPlan plan;
  plan.algorithm = source ? "fastv" : "fast";
  plan.alpha = alpha;
  plan.budget = budget;
  plan.psi = psi;
  plan.seed = seed;
  plan.source = source;
  plan.workers = std::max(1, options.workers);
  plan.fairness_estimated = !exact_trajectory;

  const EstimatorOptions est_options{plan.workers};
  auto estimated_objective = [&](const EstimatorSet& est) {
    if (source) return est.eta(*source);  // eta'_v estimates pi_v(S)
    return group_mass(est.sigma, group);  // sum of sigma'_s estimates pi(S)
  };

  if (exact_trajectory)
    plan.initial_fairness = exact_fairness(graph, group, alpha, source, options.dense_cap);

  for (int round = 1; round <= budget; ++round) {
    const ForestSampler sampler(graph, alpha);
    const EstimatorSet est =
        estimate_aux(sampler, psi, group, source,
                     derive_seed(seed, static_cast<std::uint64_t>(round)), est_options);
    if (!exact_trajectory) {
      // Batch t is drawn before round t's rewiring, so it measures the
      // state after round t-1.
      const double fairness_before = estimated_objective(est);
      if (round == 1)
        plan.initial_fairness = fairness_before;
      else
        plan.steps.back().fairness_after = fairness_before;
    }

    const CandidateSet candidates = candidate_targets(est.eta, graph);
    const Vector& score = source ? *est.sigma_tilde : est.sigma;
    const auto selection = select_rewiring(graph, score, est.eta, candidates, alpha);
    if (!selection)
      throw AlgorithmError("no legal rewiring exists at round " + std::to_string(round) +
                           "; completed " + std::to_string(round - 1) + " steps");

    apply_rewiring(graph, selection->rewiring);
    const double fairness_after =
        exact_trajectory ? exact_fairness(graph, group, alpha, source, options.dense_cap)
                         : std::numeric_limits<double>::quiet_NaN();
    plan.steps.push_back({selection->rewiring, selection->score, fairness_after,
                          selection->effective_candidates});
    if (!(selection->score > 0.0)) plan.nonpositive_rounds.push_back(round);
  }

  if (!exact_trajectory) {
    const EstimatorSet est = estimate_aux(
        ForestSampler(graph, alpha), psi, group, source,
        derive_seed(seed, static_cast<std::uint64_t>(budget) + 1), est_options);
    plan.steps.back().fairness_after = estimated_objective(est);
  }

  if (source) {
    auto organic = [&](double raw) {
      return (raw - (group.contains(*source) ? alpha : 0.0)) / (1.0 - alpha);
    };
    plan.organic_initial = organic(plan.initial_fairness);
    plan.organic_final = organic(plan.final_fairness());
  }
  return plan;
}

}  // namespace

RewiringPlan fast_rewire(const DirectedGraph& g, const GroupPartition& group, int budget,
                         std::int64_t psi, double alpha, std::uint64_t seed,
                         const FastOptions& options) {
  return run_fast(g, group, std::nullopt, budget, psi, alpha, seed, options);
}

RewiringPlan fastv_rewire(const DirectedGraph& g, const GroupPartition& group, NodeId source,
                          int budget, std::int64_t psi, double alpha, std::uint64_t seed,
                          const FastOptions& options) {
  return run_fast(g, group, source, budget, psi, alpha, seed, options);
}

}  // namespace prfair
