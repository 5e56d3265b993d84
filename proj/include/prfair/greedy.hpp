#pragma once

#include "prfair/pagerank.hpp"
#include "prfair/plan.hpp"

namespace prfair {

struct ExactOptions {
  Index dense_cap = kDefaultDenseCap;
  int workers = 1;
  /// Pi is refreshed from scratch when its row sums drift further than
  /// this after chained rank-one updates.
  double drift_tolerance = 1e-6;
};

/// Greedy exact PR-fairness rewiring: b rounds, each selecting the
/// argmax of the closed-form gain over all legal rewirings
/// {(i,j) in E, (i,k) not in E, i != k}, then updating Pi by the
/// Sherman-Morrison step. Ties break lexicographically by (i, j, k); the
/// plan is fully deterministic.
RewiringPlan exact_rewire(const DirectedGraph& g, const GroupPartition& group, int budget,
                          double alpha, const ExactOptions& options = {});

/// PPR variant: identical loop with the gain for the given source node.
/// The fairness trajectory records raw pi_v(S).
RewiringPlan exactv_rewire(const DirectedGraph& g, const GroupPartition& group, NodeId source,
                           int budget, double alpha, const ExactOptions& options = {});

struct ExactScanResult {
  Rewiring rewiring;
  double gain;
};

/// One full candidate scan (argmax of Delta over legal rewirings) against
/// the supplied Pi and aux vectors; exposed for oracle-style testing.
/// Returns nullopt when no legal rewiring exists.
std::optional<ExactScanResult> exact_scan(const DirectedGraph& g, const PiMatrix& pi,
                                          const Vector& score_source, const Vector& eta,
                                          int workers = 1);

}  // namespace prfair
