#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "prfair/types.hpp"

namespace prfair {

struct Arc {
  NodeId target;
  double weight;
};

/// Edge rewiring (i, j, k): replace the existing arc (i, j) by the missing
/// arc (i, k). The new arc inherits the removed arc's weight, so the
/// weighted out-degree of i is unchanged.
struct Rewiring {
  NodeId source;          // i
  NodeId removed_target;  // j
  NodeId added_target;    // k
};

inline bool operator==(const Rewiring& a, const Rewiring& b) {
  return a.source == b.source && a.removed_target == b.removed_target &&
         a.added_target == b.added_target;
}

inline bool lex_less(const Rewiring& a, const Rewiring& b) {
  return std::tuple(a.source, a.removed_target, a.added_target) <
         std::tuple(b.source, b.removed_target, b.added_target);
}

/// Directed weighted graph with dense 0-based node ids, per-node sorted
/// out-adjacency and cached weighted out-degrees. External node labels map
/// to indices in sorted label order (numeric when all labels are numeric),
/// which makes load/serialize round trips reproduce the same indexing.
///
/// Invariants: positive arc weights, no self-loops, no duplicate arcs,
/// and (unless explicitly allowed for degenerate test graphs) every node
/// has at least one outgoing arc.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  static DirectedGraph from_arcs(Index node_count,
                                 std::span<const std::tuple<NodeId, NodeId, double>> arcs,
                                 bool allow_zero_out_degree = false);

  Index node_count() const { return static_cast<Index>(adjacency_.size()); }
  Index arc_count() const { return arc_count_; }

  std::span<const Arc> out(NodeId i) const {
    return {adjacency_[static_cast<std::size_t>(i)].data(),
            adjacency_[static_cast<std::size_t>(i)].size()};
  }

  Index out_count(NodeId i) const {
    return static_cast<Index>(adjacency_[static_cast<std::size_t>(i)].size());
  }

  /// Weighted out-degree d_i (sum of outgoing arc weights).
  double out_degree(NodeId i) const { return out_degree_[static_cast<std::size_t>(i)]; }

  /// Maximum weighted out-degree over all nodes.
  double max_out_degree() const { return max_out_degree_; }

  /// Maximum number of out-neighbors over all nodes. Invariant under
  /// rewiring; used to size the restricted candidate set.
  Index max_out_count() const { return max_out_count_; }

  bool has_arc(NodeId i, NodeId j) const;

  /// Weight of arc (i, j), or nullopt if absent.
  std::optional<double> arc_weight(NodeId i, NodeId j) const;

  /// Transition probability p_ij = w(i,j)/d_i, or 0 if the arc is absent.
  double transition_prob(NodeId i, NodeId j) const;

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId i) const { return labels_[static_cast<std::size_t>(i)]; }
  std::optional<NodeId> index_of(std::string_view label) const;

  bool has_zero_out_degree_node() const;

  friend void apply_rewiring(DirectedGraph& g, const Rewiring& r);
  friend DirectedGraph load_graph(std::string_view edge_list_text, bool symmetrize);

 private:
  std::vector<std::vector<Arc>> adjacency_;  // each sorted by target id
  std::vector<double> out_degree_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
  Index arc_count_ = 0;
  double max_out_degree_ = 0.0;
  Index max_out_count_ = 0;

  void finalize();  // sorts adjacency, validates, fills caches
};

/// Disadvantaged node set S with population ratio r(S) = |S|/n and
/// fairness threshold phi (default r(S)). S must be a non-empty strict
/// subset of V.
class GroupPartition {
 public:
  GroupPartition(const DirectedGraph& g, std::vector<NodeId> members,
                 std::optional<double> phi = std::nullopt);

  const std::vector<NodeId>& members() const { return members_; }
  bool contains(NodeId u) const { return in_set_[static_cast<std::size_t>(u)] != 0; }
  const std::vector<std::uint8_t>& membership() const { return in_set_; }
  Index size() const { return static_cast<Index>(members_.size()); }
  double ratio() const { return ratio_; }
  double phi() const { return phi_; }

 private:
  std::vector<NodeId> members_;        // sorted
  std::vector<std::uint8_t> in_set_;   // length n
  double ratio_;
  double phi_;
};

/// Reweighted graph G_r: same topology as the source graph with arc
/// weights w_r(i,j) = w(i,j) / ((alpha/(1-alpha)) * d_i). Every node's
/// out-weight then sums to (1-alpha)/alpha, and the forest matrix of G_r
/// equals the PageRank matrix Pi of the source graph.
struct ReweightedGraph {
  double alpha = 0.0;
  std::vector<std::vector<Arc>> adjacency;  // sorted by target, same shape as source

  Index node_count() const { return static_cast<Index>(adjacency.size()); }
  std::span<const Arc> out(NodeId i) const {
    return {adjacency[static_cast<std::size_t>(i)].data(),
            adjacency[static_cast<std::size_t>(i)].size()};
  }
};

/// Parses whitespace-separated "src dst [weight]" lines ('#' starts a
/// comment, weight defaults to 1). With symmetrize, each line yields both
/// arcs. Rejects self-loops, duplicate arcs, malformed lines (with line
/// number) and nodes of out-degree zero.
DirectedGraph load_graph(std::string_view edge_list_text, bool symmetrize = false);
DirectedGraph load_graph_file(const std::string& path, bool symmetrize = false);

/// Inverse of load_graph on the dense-index representation: arcs grouped
/// by source index with explicit weights, one per line.
std::string serialize_graph(const DirectedGraph& g);

/// Reads one node label per line ('#' comments allowed) into a group.
GroupPartition load_group(const DirectedGraph& g, std::string_view text,
                          std::optional<double> phi = std::nullopt);
GroupPartition load_group_file(const DirectedGraph& g, const std::string& path,
                               std::optional<double> phi = std::nullopt);

/// Applies r in place after validating the Rewiring invariants:
/// (i,j) in E, (i,k) not in E, i != k, j != k. The new arc carries the
/// removed arc's weight; m and all out-degrees are preserved.
void apply_rewiring(DirectedGraph& g, const Rewiring& r);

/// Returns a rewired copy.
DirectedGraph rewired(const DirectedGraph& g, const Rewiring& r);

/// Builds G_r from g for alpha in (0, 1).
ReweightedGraph build_reweighted(const DirectedGraph& g, double alpha);

}  // namespace prfair
