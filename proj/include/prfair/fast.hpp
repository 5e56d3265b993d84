#pragma once

#include <cstdint>
#include <optional>

#include "prfair/forest.hpp"
#include "prfair/pagerank.hpp"
#include "prfair/plan.hpp"

namespace prfair {

/// Restricted rewiring-target set: all nodes ranked by eta' descending
/// (ties by id ascending) with a base prefix of max-out-count + 2 nodes.
/// Selection extends past the prefix only for a source whose prefix holds
/// no legal target, which makes a legal target guaranteed whenever one
/// exists at all.
struct CandidateSet {
  std::vector<NodeId> ranked;
  Index base_size = 0;

  /// Highest-ranked legal target for source i (first ranked k with
  /// k != i and (i,k) missing). depth_out receives the 1-based rank
  /// scanned, i.e. the effective prefix length for this source.
  NodeId best_target(const DirectedGraph& g, NodeId i, Index* depth_out = nullptr) const;

  /// Smallest-id legal target within the effective prefix; tie-break
  /// candidate for zero-coefficient edges, where every target scores 0.
  NodeId min_id_target(const DirectedGraph& g, NodeId i) const;
};

CandidateSet candidate_targets(const Vector& eta, const DirectedGraph& g);

/// Tau-free sampled score Delta-hat' = (1-alpha) p_ij sigma_i (eta_k - eta_j).
inline double approx_gain(double p_ij, double sigma_i, double eta_j, double eta_k,
                          double alpha) {
  return (1.0 - alpha) * p_ij * sigma_i * (eta_k - eta_j);
}

struct FastSelection {
  Rewiring rewiring;
  double score = 0.0;
  Index effective_candidates = 0;  // deepest ranked prefix consulted
};

/// Argmax of the tau-free score over {(i,j) in E, k in K, (i,k) not in E,
/// i != k}; ties break lexicographically by (i,j,k). score_source is
/// sigma' for the PR objective or sigma-tilde' for the PPR one (exact
/// vectors may be injected to study the estimator-free selector).
std::optional<FastSelection> select_rewiring(const DirectedGraph& g, const Vector& score_source,
                                             const Vector& eta, const CandidateSet& candidates,
                                             double alpha);

struct FastOptions {
  enum class Trajectory { kAuto, kExact, kEstimate };
  int workers = 1;
  Index dense_cap = kDefaultDenseCap;
  /// kAuto solves the fairness trajectory exactly when n fits the dense
  /// cap and otherwise estimates it from the next round's forest batch.
  Trajectory trajectory = Trajectory::kAuto;
};

/// Sampling-based greedy rewiring: per round, estimates sigma'/eta' from
/// psi fresh forests on the current graph, restricts targets to the
/// top-eta' candidate set and applies the argmax of the tau-free score.
/// Deterministic for fixed (seed, psi, workers).
RewiringPlan fast_rewire(const DirectedGraph& g, const GroupPartition& group, int budget,
                         std::int64_t psi, double alpha, std::uint64_t seed,
                         const FastOptions& options = {});

/// PPR variant driven by sigma-tilde'; trajectory records raw pi_v(S).
RewiringPlan fastv_rewire(const DirectedGraph& g, const GroupPartition& group, NodeId source,
                          int budget, std::int64_t psi, double alpha, std::uint64_t seed,
                          const FastOptions& options = {});

}  // namespace prfair
