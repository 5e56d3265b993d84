#pragma once

#include <cstdint>
#include <vector>

#include "prfair/graph.hpp"
#include "prfair/rng.hpp"

namespace prfair::testing {

DirectedGraph two_cycle();
DirectedGraph three_cycle();
DirectedGraph cycle(Index n);

/// Complete digraph on n nodes (no legal rewiring exists anywhere).
DirectedGraph complete_digraph(Index n);

/// Random digraph with out-degrees in [min_out, max_out], distinct
/// non-self targets; weights drawn from (0.5, 2.0) when weighted.
DirectedGraph random_digraph(Index n, Index min_out, Index max_out, bool weighted,
                             RandomStream& rng);

/// Random digraph where every node has exactly `out` out-neighbors.
DirectedGraph random_regular_digraph(Index n, Index out, RandomStream& rng);

/// Random group of the given size over [0, n).
std::vector<NodeId> random_group(Index n, Index size, RandomStream& rng);

/// Mirror-symmetric digraph on 2h nodes: the swap x <-> x+h is an
/// automorphism exchanging S = {0..h-1} with its complement.
DirectedGraph group_symmetric_digraph(Index half, RandomStream& rng);

/// Synthetic stand-in for the Books co-purchasing network: 92 nodes,
/// 374 undirected edges (748 arcs), disadvantaged group of 49 nodes with
/// initial PageRank mass slightly below its population ratio 0.533.
DirectedGraph books_surrogate();
std::vector<NodeId> books_surrogate_group();

/// Uniform random legal rewiring drawn by rejection; requires one exists.
Rewiring random_legal_rewiring(const DirectedGraph& g, RandomStream& rng);

}  // namespace prfair::testing
