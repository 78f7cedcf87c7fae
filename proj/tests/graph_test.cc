#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "anonet/error.h"
#include "anonet/graph.h"
#include "support.h"

namespace anonet {
namespace {

TEST(BuildGraph, CompleteHasAllPairs) {
  Graph g = build_graph("complete:4", 0);
  EXPECT_EQ(g.node_count(), 4);
  EXPECT_EQ(g.edge_count(), 6u);
  EXPECT_TRUE(g.is_complete());
  EXPECT_EQ(g.generator_tag(), "complete:4");
}

TEST(BuildGraph, CycleDegreesAreTwo) {
  Graph g = build_graph("cycle:5", 0);
  EXPECT_EQ(g.edge_count(), 5u);
  for (const auto& nbrs : g.adjacency()) EXPECT_EQ(nbrs.size(), 2u);
}

TEST(BuildGraph, PathAndStar) {
  EXPECT_EQ(build_graph("path:6", 0).edge_count(), 5u);
  Graph star = build_graph("star:5", 0);
  EXPECT_EQ(star.adjacency()[0].size(), 4u);
}

TEST(BuildGraph, GnpIsConnectedAndSeeded) {
  Graph a = build_graph("gnp:10:0.4", 7);
  Graph b = build_graph("gnp:10:0.4", 7);
  EXPECT_TRUE(testing::naive_connected(a));
  EXPECT_EQ(a.edges(), b.edges());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_TRUE(testing::naive_connected(build_graph("gnp:12:0.3", seed)));
  }
}

TEST(BuildGraph, RejectsBadSpecs) {
  for (const char* spec : {"", "complete", "complete:1", "complete:x", "cycle:2", "gnp:10",
                           "gnp:10:0", "gnp:10:1.5", "torus:4", "file:/no/such/file"}) {
    EXPECT_THROW(build_graph(spec, 0), ConfigError) << spec;
  }
  // p small enough that 1000 attempts never connect 40 nodes.
  EXPECT_THROW(build_graph("gnp:40:0.001", 1), ConfigError);
}

TEST(GraphInvariants, ConstructorValidates) {
  EXPECT_THROW(Graph(1, {}, "x"), ConfigError);
  EXPECT_THROW(Graph(2, {{0, 0}}, "x"), ConfigError);
  EXPECT_THROW(Graph(3, {{0, 1}, {0, 1}, {1, 2}}, "x"), ConfigError);
  EXPECT_THROW(Graph(4, {{0, 1}, {2, 3}}, "x"), ConfigError);
  EXPECT_NO_THROW(Graph(2, {{0, 1}}, "x"));
}

TEST(GraphFile, RoundTripWithComments) {
  auto path = std::filesystem::temp_directory_path() / "anonet_graph_test.txt";
  {
    std::ofstream f(path);
    f << "# a square with a diagonal\n0 1\n1 2  # trailing\n2 3\n3 0\n\n0 2\n";
  }
  Graph g = build_graph("file:" + path.string(), 0);
  EXPECT_EQ(g.node_count(), 4);
  EXPECT_EQ(g.edge_count(), 5u);
  EXPECT_TRUE(g.has_edge(2, 0));

  auto copy = std::filesystem::temp_directory_path() / "anonet_graph_copy.txt";
  write_graph_file(g, copy.string());
  EXPECT_EQ(read_graph_file(copy.string()).edges(), g.edges());

  {
    std::ofstream f(path);
    f << "0 1\n2 3\n";
  }
  EXPECT_THROW(read_graph_file(path.string()), ConfigError);
  {
    std::ofstream f(path);
    f << "0 x\n";
  }
  EXPECT_THROW(read_graph_file(path.string()), ConfigError);
  std::filesystem::remove(path);
  std::filesystem::remove(copy);
}

TEST(Rewire, NoneIsIdentity) {
  Graph g = build_graph("cycle:6", 0);
  Graph before = g;
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(rewire(g, RewirePolicy::none(), rng));
  EXPECT_EQ(g.edges(), before.edges());
}

TEST(Rewire, PolicyParsing) {
  EXPECT_EQ(parse_rewire_policy("none").kind, RewirePolicy::Kind::kNone);
  auto p = parse_rewire_policy("swap:7");
  EXPECT_EQ(p.kind, RewirePolicy::Kind::kSwap);
  EXPECT_EQ(p.period, 7);
  EXPECT_EQ(to_string(p), "swap:7");
  for (const char* bad : {"swap", "swap:0", "swap:-1", "swap:x", "flip:3"}) {
    EXPECT_THROW(parse_rewire_policy(bad), ConfigError) << bad;
  }
}

// Property: any sequence of swaps keeps the graph simple, connected and
// degree-preserving.
TEST(Rewire, PreservesConnectivityAndDegrees) {
  for (const char* spec : {"cycle:5", "cycle:12", "path:8", "gnp:14:0.3", "star:6"}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Graph g = build_graph(spec, seed);
      std::vector<std::size_t> degrees;
      for (auto& a : g.adjacency()) degrees.push_back(a.size());
      Rng rng(seed);
      int changed = 0;
      for (int step = 0; step < 200; ++step) {
        changed += rewire(g, RewirePolicy::swap(1), rng);
        ASSERT_TRUE(testing::naive_connected(g)) << spec << " seed " << seed;
        // The constructor re-checks simplicity.
        ASSERT_NO_THROW(Graph(g.node_count(), g.edges(), "check"));
      }
      std::vector<std::size_t> after;
      for (auto& a : g.adjacency()) after.push_back(a.size());
      EXPECT_EQ(degrees, after);
      if (std::string(spec) == "gnp:14:0.3") EXPECT_GT(changed, 0);
    }
  }
}

}  // namespace
}  // namespace anonet
