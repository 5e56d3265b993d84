#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "prfair/errors.hpp"
#include "prfair/graph.hpp"

using namespace prfair;
namespace fx = prfair::testing;

TEST_CASE("load_graph parses a minimal two-cycle") {
  const auto g = load_graph("0 1\n1 0");
  CHECK(g.node_count() == 2);
  CHECK(g.arc_count() == 2);
  CHECK(g.out_degree(0) == doctest::Approx(1.0));
  CHECK(g.out_degree(1) == doctest::Approx(1.0));
  CHECK(g.has_arc(0, 1));
  CHECK(g.has_arc(1, 0));
}

TEST_CASE("load_graph maps labels and weights") {
  const auto g = load_graph("a b 2\nb a 3");
  REQUIRE(g.node_count() == 2);
  CHECK(g.index_of("a") == NodeId{0});
  CHECK(g.index_of("b") == NodeId{1});
  CHECK(g.arc_weight(0, 1) == doctest::Approx(2.0));
  CHECK(g.arc_weight(1, 0) == doctest::Approx(3.0));
}

TEST_CASE("load_graph rejects dangling nodes, naming them") {
  try {
    load_graph("0 1");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("'1'") != std::string::npos);
  }
}

TEST_CASE("load_graph symmetrize expands undirected lines") {
  const auto g = load_graph("0 1\n1 2\n2 0", /*symmetrize=*/true);
  CHECK(g.arc_count() == 6);
  CHECK(g.has_arc(1, 0));
  CHECK(g.has_arc(0, 2));
}

TEST_CASE("load_graph reports malformed lines with their number") {
  try {
    load_graph("0 1\n1 0 oops extra");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(load_graph("0 1\n1 0 -3"), DataError);
  CHECK_THROWS_AS(load_graph("0 1\n1 0 nan"), DataError);
}

TEST_CASE("load_graph rejects self-loops and duplicate arcs") {
  CHECK_THROWS_AS(load_graph("0 0\n0 1\n1 0"), DataError);
  CHECK_THROWS_AS(load_graph("0 1\n0 1\n1 0"), DataError);
  // Symmetrize turns a repeated undirected pair into a duplicate arc.
  CHECK_THROWS_AS(load_graph("a b\nb a", /*symmetrize=*/true), DataError);
}

TEST_CASE("load_graph handles comments and blank lines") {
  const auto g = load_graph("# a comment\n\n0 1  # trailing\n1 0\n");
  CHECK(g.node_count() == 2);
  CHECK(g.arc_count() == 2);
}

TEST_CASE("apply_rewiring on the three-cycle") {
  auto g = fx::three_cycle();
  apply_rewiring(g, {0, 1, 2});
  CHECK(g.arc_count() == 3);
  CHECK(g.has_arc(0, 2));
  CHECK(g.has_arc(1, 2));
  CHECK(g.has_arc(2, 0));
  CHECK_FALSE(g.has_arc(0, 1));
  for (NodeId u = 0; u < 3; ++u) CHECK(g.out_degree(u) == doctest::Approx(1.0));
}

TEST_CASE("apply_rewiring carries the removed arc's weight") {
  const std::tuple<NodeId, NodeId, double> arcs[] = {
      {0, 1, 2.0}, {1, 0, 1.0}, {2, 0, 1.0}, {3, 0, 1.0}};
  auto g = DirectedGraph::from_arcs(4, arcs);
  apply_rewiring(g, {0, 1, 3});
  CHECK(g.arc_weight(0, 3) == doctest::Approx(2.0));
  CHECK(g.out_degree(0) == doctest::Approx(2.0));
}

TEST_CASE("apply_rewiring validates its preconditions") {
  auto g = fx::three_cycle();
  CHECK_THROWS_AS(apply_rewiring(g, {0, 1, 1}), DataError);  // j == k
  CHECK_THROWS_AS(apply_rewiring(g, {0, 1, 0}), DataError);  // k == i
  CHECK_THROWS_AS(apply_rewiring(g, {0, 2, 1}), DataError);  // (i, j) missing
  auto h = fx::complete_digraph(3);
  CHECK_THROWS_AS(apply_rewiring(h, {0, 1, 2}), DataError);  // (i, k) present
}

TEST_CASE("rewiring sequences preserve m and the degree sequence") {
  RandomStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = fx::random_digraph(12, 1, 4, trial % 2 == 1, rng);
    const Index m_before = g.arc_count();
    std::vector<double> degrees;
    std::vector<Index> counts;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      degrees.push_back(g.out_degree(u));
      counts.push_back(g.out_count(u));
    }
    for (int step = 0; step < 15; ++step)
      apply_rewiring(g, fx::random_legal_rewiring(g, rng));
    CHECK(g.arc_count() == m_before);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      CHECK(g.out_degree(u) == doctest::Approx(degrees[u]).epsilon(1e-12));
      CHECK(g.out_count(u) == counts[u]);
    }
  }
}

TEST_CASE("build_reweighted matches the closed-form weights") {
  // Node 0 has out-weights (2, 3); alpha = 0.15.
  const std::tuple<NodeId, NodeId, double> arcs[] = {
      {0, 1, 2.0}, {0, 2, 3.0}, {1, 0, 1.0}, {2, 0, 1.0}};
  const auto g = DirectedGraph::from_arcs(3, arcs);
  const auto gr = build_reweighted(g, 0.15);
  REQUIRE(gr.out(0).size() == 2);
  CHECK(gr.out(0)[0].weight == doctest::Approx(2.2666666666666666).epsilon(1e-12));
  CHECK(gr.out(0)[1].weight == doctest::Approx(3.4).epsilon(1e-12));
  double sum = 0.0;
  for (const Arc& a : gr.out(0)) sum += a.weight;
  CHECK(sum == doctest::Approx(0.85 / 0.15).epsilon(1e-12));
  // Unweighted out-degree-1 node: single reweighted arc of (1-a)/a.
  CHECK(gr.out(1)[0].weight == doctest::Approx(0.85 / 0.15).epsilon(1e-12));
}

TEST_CASE("build_reweighted normalizes every node's out-weight to (1-a)/a") {
  RandomStream rng(11);
  for (double alpha : {0.05, 0.15, 0.5, 0.85}) {
    const auto g = fx::random_digraph(20, 1, 5, true, rng);
    const auto gr = build_reweighted(g, alpha);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      double sum = 0.0;
      for (const Arc& a : gr.out(u)) sum += a.weight;
      CHECK(sum == doctest::Approx((1.0 - alpha) / alpha).epsilon(1e-12));
    }
  }
  // alpha = 0.5 gives unit out-weight exactly.
  const auto gr = build_reweighted(fx::two_cycle(), 0.5);
  CHECK(gr.out(0)[0].weight == doctest::Approx(1.0));
}

TEST_CASE("build_reweighted rejects alpha outside (0,1)") {
  const auto g = fx::two_cycle();
  CHECK_THROWS_AS(build_reweighted(g, 0.0), ConfigError);
  CHECK_THROWS_AS(build_reweighted(g, 1.0), ConfigError);
  CHECK_THROWS_AS(build_reweighted(g, -0.1), ConfigError);
}

TEST_CASE("serialize then load is the identity on the dense representation") {
  RandomStream rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = fx::random_digraph(15, 1, 4, true, rng);
    const std::string text = serialize_graph(g);
    const auto reloaded = load_graph(text);
    REQUIRE(reloaded.node_count() == g.node_count());
    CHECK(reloaded.arc_count() == g.arc_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
      CHECK(reloaded.label(u) == g.label(u));
      const auto a = g.out(u);
      const auto b = reloaded.out(u);
      REQUIRE(a.size() == b.size());
      for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].target == b[t].target);
        CHECK(a[t].weight == b[t].weight);
      }
    }
    CHECK(serialize_graph(reloaded) == text);
  }
}

TEST_CASE("group partition validates membership and threshold") {
  const auto g = fx::three_cycle();
  CHECK_THROWS_AS(GroupPartition(g, {}), DataError);
  CHECK_THROWS_AS(GroupPartition(g, {0, 1, 2}), DataError);
  CHECK_THROWS_AS(GroupPartition(g, {5}), DataError);
  const GroupPartition s(g, {2});
  CHECK(s.ratio() == doctest::Approx(1.0 / 3.0));
  CHECK(s.phi() == doctest::Approx(1.0 / 3.0));
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(0));
  const GroupPartition with_phi(g, {2}, 0.4);
  CHECK(with_phi.phi() == doctest::Approx(0.4));
}

TEST_CASE("load_group reads labels and rejects unknown ones") {
  const auto g = load_graph("a b\nb c\nc a");
  const auto s = load_group(g, "b\n# comment\nc\n");
  CHECK(s.size() == 2);
  CHECK(s.contains(*g.index_of("b")));
  CHECK_THROWS_AS(load_group(g, "zz\n"), DataError);
}
