#include "fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace prfair::testing {

namespace {
using ArcTuple = std::tuple<NodeId, NodeId, double>;
}

DirectedGraph two_cycle() {
  const ArcTuple arcs[] = {{0, 1, 1.0}, {1, 0, 1.0}};
  return DirectedGraph::from_arcs(2, arcs);
}

DirectedGraph three_cycle() { return cycle(3); }

DirectedGraph cycle(Index n) {
  std::vector<ArcTuple> arcs;
  for (Index i = 0; i < n; ++i)
    arcs.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n), 1.0);
  return DirectedGraph::from_arcs(n, arcs);
}

DirectedGraph complete_digraph(Index n) {
  std::vector<ArcTuple> arcs;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) arcs.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0);
  return DirectedGraph::from_arcs(n, arcs);
}

DirectedGraph random_digraph(Index n, Index min_out, Index max_out, bool weighted,
                             RandomStream& rng) {
  std::vector<ArcTuple> arcs;
  for (Index i = 0; i < n; ++i) {
    const Index degree =
        min_out + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(max_out - min_out + 1)));
    std::set<NodeId> targets;
    while (static_cast<Index>(targets.size()) < std::min(degree, n - 1)) {
      const auto t = static_cast<NodeId>(rng.bounded(static_cast<std::uint64_t>(n)));
      if (t != static_cast<NodeId>(i)) targets.insert(t);
    }
    for (NodeId t : targets) {
      const double w = weighted ? 0.5 + 1.5 * rng.uniform01() : 1.0;
      arcs.emplace_back(static_cast<NodeId>(i), t, w);
    }
  }
  return DirectedGraph::from_arcs(n, arcs);
}

DirectedGraph random_regular_digraph(Index n, Index out, RandomStream& rng) {
  std::vector<ArcTuple> arcs;
  for (Index i = 0; i < n; ++i) {
    std::set<NodeId> targets;
    while (static_cast<Index>(targets.size()) < out) {
      const auto t = static_cast<NodeId>(rng.bounded(static_cast<std::uint64_t>(n)));
      if (t != static_cast<NodeId>(i)) targets.insert(t);
    }
    for (NodeId t : targets) arcs.emplace_back(static_cast<NodeId>(i), t, 1.0);
  }
  return DirectedGraph::from_arcs(n, arcs);
}

std::vector<NodeId> random_group(Index n, Index size, RandomStream& rng) {
  std::vector<NodeId> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), NodeId{0});
  for (Index t = 0; t < size; ++t) {
    const auto swap_with = t + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(n - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(swap_with)]);
  }
  pool.resize(static_cast<std::size_t>(size));
  return pool;
}

DirectedGraph group_symmetric_digraph(Index half, RandomStream& rng) {
  std::vector<ArcTuple> arcs;
  auto pick_other = [&](Index u) {
    for (;;) {
      const auto t = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(half)));
      if (t != u) return t;
    }
  };
  for (Index u = 0; u < half; ++u) {
    const Index in_side = pick_other(u);
    const Index cross = static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(half)));
    arcs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(in_side), 1.0);
    arcs.emplace_back(static_cast<NodeId>(u + half), static_cast<NodeId>(in_side + half), 1.0);
    arcs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(cross + half), 1.0);
    arcs.emplace_back(static_cast<NodeId>(u + half), static_cast<NodeId>(cross), 1.0);
  }
  return DirectedGraph::from_arcs(2 * half, arcs);
}

DirectedGraph books_surrogate() {
  constexpr Index kNodes = 92;
  constexpr Index kEdges = 374;        // undirected; 748 arcs after symmetrization
  constexpr Index kGroupSize = 49;     // r(S) = 49/92 = 0.533
  constexpr double kBiasTowardT = 0.07;
  RandomStream rng(0xB00C5u);

  std::set<std::pair<NodeId, NodeId>> edges;
  auto normalized = [](NodeId a, NodeId b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };

  // A random ring keeps every node covered; biased extra edges steer
  // random-walk mass toward the advantaged block T = {49..91}.
  std::vector<NodeId> perm(kNodes);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  for (Index t = 0; t < kNodes; ++t) {
    const auto swap_with =
        t + static_cast<Index>(rng.bounded(static_cast<std::uint64_t>(kNodes - t)));
    std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(swap_with)]);
  }
  for (Index t = 0; t < kNodes; ++t)
    edges.insert(normalized(perm[static_cast<std::size_t>(t)],
                            perm[static_cast<std::size_t>((t + 1) % kNodes)]));

  while (static_cast<Index>(edges.size()) < kEdges) {
    const auto u = static_cast<NodeId>(rng.bounded(kNodes));
    NodeId v;
    if (rng.uniform01() < kBiasTowardT)
      v = static_cast<NodeId>(kGroupSize + rng.bounded(kNodes - kGroupSize));
    else
      v = static_cast<NodeId>(rng.bounded(kNodes));
    if (u == v) continue;
    edges.insert(normalized(u, v));
  }

  std::vector<ArcTuple> arcs;
  for (const auto& [a, b] : edges) {
    arcs.emplace_back(a, b, 1.0);
    arcs.emplace_back(b, a, 1.0);
  }
  return DirectedGraph::from_arcs(kNodes, arcs);
}

std::vector<NodeId> books_surrogate_group() {
  std::vector<NodeId> group(49);
  std::iota(group.begin(), group.end(), NodeId{0});
  return group;
}

Rewiring random_legal_rewiring(const DirectedGraph& g, RandomStream& rng) {
  const Index n = g.node_count();
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const auto i = static_cast<NodeId>(rng.bounded(static_cast<std::uint64_t>(n)));
    const auto arcs = g.out(i);
    if (arcs.empty() || static_cast<Index>(arcs.size()) >= n - 1) continue;
    const NodeId j = arcs[rng.bounded(arcs.size())].target;
    const auto k = static_cast<NodeId>(rng.bounded(static_cast<std::uint64_t>(n)));
    if (k == i || g.has_arc(i, k)) continue;
    return Rewiring{i, j, k};
  }
  throw std::runtime_error("no legal rewiring found by rejection sampling");
}

}  // namespace prfair::testing
