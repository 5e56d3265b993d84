#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prfair/errors.hpp"
#include "prfair/graph.hpp"
#include "prfair/rng.hpp"
#include "prfair/types.hpp"

namespace prfair {

/// Hoeffding sample count psi = ceil(ln(2/delta) / (2 eps^2)) guaranteeing
/// per-entry deviation at most eps with failure probability at most delta.
std::int64_t required_samples(double epsilon, double delta);

/// One sampled spanning rooted forest: root assignment for every node and
/// the parent pointers tracing each node toward its root (kNoNode at roots).
struct ForestSample {
  std::vector<NodeId> root;
  std::vector<NodeId> parent;
};

/// Averaged estimators over psi sampled forests:
///   sigma'_s = sum_j |M(F_j, s)| / (n psi)
///   eta'_s   = sum_j 1[root_j(s) in S] / psi
///   sigma~'_s = sum_j 1[root_j(v) = s] / psi   (when a source v is given)
struct EstimatorSet {
  Vector sigma;
  Vector eta;
  std::optional<Vector> sigma_tilde;
  std::int64_t psi = 0;
  std::uint64_t seed = 0;
  std::uint64_t total_steps = 0;  // walk steps across all samples
};

/// Reusable per-thread buffers for repeated sampling.
struct ForestWorkspace {
  std::vector<NodeId> root;
  std::vector<NodeId> parent;
  std::vector<std::uint8_t> in_forest;
};

/// Wilson-style loop-erased random walk sampler for weighted spanning
/// rooted forests of the reweighted graph G_r. Absorption into the hidden
/// super-node happens with probability exactly alpha per step (G_r's
/// per-node out-weight is (1-alpha)/alpha), and neighbor steps follow the
/// source graph's transition probabilities, so the tables are built from
/// the original graph without materializing G_r's weights.
class ForestSampler {
 public:
  ForestSampler(const DirectedGraph& g, double alpha);
  explicit ForestSampler(const ReweightedGraph& gr);

  Index node_count() const { return n_; }
  double alpha() const { return alpha_; }

  /// Samples one forest with probability proportional to its weight,
  /// invoking on_node(u, root) exactly once per node as it joins the
  /// forest (roots receive on_node(r, r); a branch's nodes arrive
  /// consecutively with the same root, which lets callers aggregate
  /// per-branch tallies without re-scanning the result). Returns the
  /// number of walk steps taken.
  template <typename OnNode>
  std::uint64_t sample_visit(RandomStream& rng, ForestWorkspace& ws, OnNode&& on_node) const;

  std::uint64_t sample_into(RandomStream& rng, ForestWorkspace& ws) const {
    return sample_visit(rng, ws, [](NodeId, NodeId) {});
  }

  ForestSample sample(RandomStream& rng) const;

 private:
  Index n_ = 0;
  double alpha_ = 0.0;
  std::vector<std::int32_t> offset_;   // n+1 prefix offsets into target_
  std::vector<NodeId> target_;
  std::vector<double> cdf_;            // per-arc cumulative probabilities; empty if all uniform
  std::vector<std::uint8_t> uniform_;  // per node: equal weights on all arcs

  template <typename OutOf>
  void build(Index n, Index arc_total, OutOf&& out_of);
  NodeId step(NodeId u, RandomStream& rng) const;
};

template <typename OnNode>
std::uint64_t ForestSampler::sample_visit(RandomStream& rng, ForestWorkspace& ws,
                                          OnNode&& on_node) const {
  // Termination of the walk is almost sure; the breaker only turns a hang
  // caused by a corrupted state into a diagnosable error.
  constexpr std::uint64_t kMaxWalkSteps = 1'000'000'000ULL;
  const auto n = static_cast<std::size_t>(n_);
  ws.root.resize(n);
  ws.parent.resize(n);
  ws.in_forest.assign(n, 0);

  std::uint64_t steps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    NodeId u = static_cast<NodeId>(i);
    while (!ws.in_forest[static_cast<std::size_t>(u)]) {
      if (++steps > kMaxWalkSteps)
        throw InternalError("forest walk exceeded the step circuit breaker");
      const bool dangling =
          offset_[static_cast<std::size_t>(u) + 1] == offset_[static_cast<std::size_t>(u)];
      if (dangling || rng.uniform01() < alpha_) {
        ws.in_forest[static_cast<std::size_t>(u)] = 1;
        ws.root[static_cast<std::size_t>(u)] = u;
        ws.parent[static_cast<std::size_t>(u)] = kNoNode;
        on_node(u, u);
      } else {
        const NodeId next = step(u, rng);
        ws.parent[static_cast<std::size_t>(u)] = next;
        u = next;
      }
    }
    const NodeId r = ws.root[static_cast<std::size_t>(u)];
    u = static_cast<NodeId>(i);
    while (!ws.in_forest[static_cast<std::size_t>(u)]) {
      ws.in_forest[static_cast<std::size_t>(u)] = 1;
      ws.root[static_cast<std::size_t>(u)] = r;
      on_node(u, r);
      u = ws.parent[static_cast<std::size_t>(u)];
    }
  }
  return steps;
}

struct EstimatorOptions {
  int workers = 1;
};

/// Estimates sigma', eta' (and sigma~' when `source` is set) from psi
/// forests. Work is split across workers with one derived RNG stream each;
/// tallies are integer counts, so results are identical for a fixed seed
/// and worker count.
EstimatorSet estimate_aux(const ForestSampler& sampler, std::int64_t psi,
                          const GroupPartition& group, std::optional<NodeId> source,
                          std::uint64_t seed, const EstimatorOptions& options = {});

EstimatorSet estimate_aux(const ReweightedGraph& gr, std::int64_t psi,
                          const GroupPartition& group, std::optional<NodeId> source,
                          std::uint64_t seed, const EstimatorOptions& options = {});

/// Convenience single-sample entry point over G_r.
ForestSample sample_forest(const ReweightedGraph& gr, RandomStream& rng);

}  // namespace prfair
