#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "scaledinc/errors.hpp"
#include "scaledinc/graph.hpp"
#include "test_util.hpp"

using namespace scaledinc;

TEST_CASE("graph normalizes edges") {
  const Graph g(3, {{1, 0}, {0, 1}, {2, 1}});
  CHECK(g.edge_count() == 2);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edges()[1] == Edge{1, 2});
  CHECK(g.degree_sum() == 4);
  CHECK(g.degree(1) == 2);
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK_THROWS_AS(Graph(2, {{0, 0}}), ValidationError);
  CHECK_THROWS_AS(Graph(2, {{0, 2}}), ValidationError);
}

TEST_CASE("edge list duplicates collapse") {
  testutil::TempDir dir;
  const auto lg = load_edge_list(dir.write("g.edges", "a\tb\nb\ta\na\tb\n"));
  CHECK(lg.graph.node_count() == 2);
  CHECK(lg.graph.edge_count() == 1);
  CHECK(lg.universe.labels() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("edge list with space separators and comments") {
  testutil::TempDir dir;
  const auto lg = load_edge_list(dir.write("g.edges", "# header\na b\n\nb c\n"));
  CHECK(lg.graph.edge_count() == 2);
  CHECK(lg.universe.labels() == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("edge list errors") {
  testutil::TempDir dir;
  CHECK_THROWS_WITH_AS(load_edge_list(dir.write("empty.edges", "")), doctest::Contains("no edges"),
                       ValidationError);
  try {
    load_edge_list(dir.write("loop.edges", "a\tb\nc\tc\n"));
    FAIL("expected self-loop error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  try {
    load_edge_list(dir.write("bad.edges", "a\tb\na\tb\tc\n"));
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_edge_list(dir / "missing.edges"), IoError);
}

TEST_CASE("two triangles joined by an edge") {
  testutil::TempDir dir;
  const auto lg = load_edge_list(dir.write(
      "t.edges", "a\tb\nb\tc\nc\ta\nd\te\ne\tf\nf\td\nc\td\n"));
  CHECK(lg.graph.node_count() == 6);
  CHECK(lg.graph.edge_count() == 7);
  CHECK(lg.graph.degree_sum() == 14);
}

TEST_CASE("edge list with a fixed universe keeps isolated nodes") {
  testutil::TempDir dir;
  const NodeUniverse u({"x", "a", "b"});
  const auto lg = load_edge_list(dir.write("g.edges", "a\tb\n"), u);
  CHECK(lg.graph.node_count() == 3);
  CHECK(lg.graph.degree(0) == 0);
  CHECK_THROWS_AS(load_edge_list(dir.write("h.edges", "a\tz\n"), u), ParseError);
}

TEST_CASE("partition id normalization") {
  testutil::TempDir dir;
  const NodeUniverse u({"a", "b", "c"});
  const auto all7 = load_partition(dir.write("p1.part", "a\t7\nb\t7\nc\t7\n"), u);
  CHECK(all7.community_count() == 1);
  CHECK(all7.membership() == std::vector<CommunityId>{0, 0, 0});
  const auto two = load_partition(dir.write("p2.part", "a\t9\nb\t2\nc\t9\n"), u);
  CHECK(two.membership() == std::vector<CommunityId>{1, 0, 1});
}

TEST_CASE("partition file errors") {
  testutil::TempDir dir;
  const NodeUniverse u({"a", "b", "c"});
  CHECK_THROWS_WITH_AS(load_partition(dir.write("m.part", "a\t1\nb\t1\n"), u), doctest::Contains("'c'"),
                       ValidationError);
  CHECK_THROWS_AS(load_partition(dir.write("u.part", "a\t1\nb\t1\nc\t1\nd\t1\n"), u), ParseError);
  CHECK_THROWS_AS(load_partition(dir.write("d.part", "a\t1\nb\t1\na\t2\nc\t1\n"), u), ParseError);
  CHECK_THROWS_AS(load_partition(dir.write("x.part", "a\tone\nb\t1\nc\t1\n"), u), ParseError);
}

TEST_CASE("community members") {
  const auto single = Partition::single_community(4);
  CHECK(community_members(single, 0) == std::vector<NodeId>{0, 1, 2, 3});
  const auto singles = Partition::singletons(4);
  for (CommunityId c = 0; c < 4; ++c) CHECK(community_members(singles, c).size() == 1);
  CHECK_THROWS_AS(community_members(single, 1), ValidationError);
}

TEST_CASE("community members match a membership scan") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_partition(rng, 10, 4);
    std::size_t total = 0;
    std::vector<int> seen(10, 0);
    for (CommunityId c = 0; c < p.community_count(); ++c) {
      std::vector<NodeId> scan;
      for (NodeId v = 0; v < 10; ++v) {
        if (p.community_of(v) == c) scan.push_back(v);
      }
      const auto members = community_members(p, c);
      CHECK(members == scan);
      CHECK_FALSE(members.empty());
      for (const auto v : members) ++seen[v];
      total += members.size();
    }
    CHECK(total == 10);
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    CHECK(all_community_members(p).size() == p.community_count());
  }
}

TEST_CASE("graph and partition round trip") {
  testutil::TempDir dir;
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = 2 + uniform_index(rng, 15);
    const auto g = oracle::random_graph(rng, n, 0.3);
    NodeUniverse u;
    for (std::size_t i = 0; i < n; ++i) u.intern("node " + std::to_string(i));
    write_edge_list(dir / "g.edges", g, u);
    write_universe(dir / "u.nodes", u);
    const auto u2 = load_universe(dir / "u.nodes");
    CHECK(u2 == u);
    const auto back = load_edge_list(dir / "g.edges", u2);
    CHECK(back.graph == g);
    CHECK(back.graph.degree_sum() % 2 == 0);
    std::uint64_t degrees = 0;
    for (NodeId v = 0; v < n; ++v) degrees += back.graph.degree(v);
    CHECK(degrees == back.graph.degree_sum());

    const auto p = oracle::random_partition(rng, n, 4);
    write_partition(dir / "p.part", p, u);
    CHECK(load_partition(dir / "p.part", u) == p);
    const auto inferred = load_partition(dir / "p.part");
    CHECK(inferred.universe == u);
    CHECK(inferred.partition == p);
  }
}

TEST_CASE("universe labels must be unique") {
  CHECK_THROWS_AS(NodeUniverse({"a", "a"}), ValidationError);
  NodeUniverse u;
  CHECK(u.intern("x") == 0);
  CHECK(u.intern("y") == 1);
  CHECK(u.intern("x") == 0);
  CHECK(u.find("y") == 1u);
  CHECK_FALSE(u.find("z").has_value());
}
