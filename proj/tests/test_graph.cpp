#include <gtest/gtest.h>

#include <algorithm>
#include <queue>

#include "aptrisk/error.hpp"
#include "aptrisk/graph.hpp"

using namespace aptrisk;

namespace {

bool connected(const Graph& g) {
  std::vector<bool> seen(g.node_count(), false);
  std::queue<int> todo;
  todo.push(0);
  seen[0] = true;
  int reached = 1;
  while (!todo.empty()) {
    const int u = todo.front();
    todo.pop();
    for (int v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        todo.push(v);
      }
    }
  }
  return reached == g.node_count();
}

void expect_simple(const Graph& g) {
  for (int i = 0; i < g.node_count(); ++i) {
    EXPECT_GE(g.degree(i), 1);
    for (int j : g.neighbors(i)) {
      EXPECT_NE(i, j);
      EXPECT_TRUE(g.has_edge(j, i));
    }
  }
  for (std::size_t k = 1; k < g.edges().size(); ++k) {
    EXPECT_LT(g.edges()[k - 1], g.edges()[k]);
  }
}

}  // namespace

TEST(DegreeWeights, Examples) {
  EXPECT_EQ(degree_weights(path_graph(2)).w, (std::vector<double>{1, 1}));
  EXPECT_EQ(degree_weights(complete_graph(3)).w, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(degree_weights(star_graph(4)).w, (std::vector<double>{3, 1, 1, 1}));
}

TEST(Graph, RejectsSelfLoopsAndIsolatedNodes) {
  const std::vector<Graph::Edge> loop{{0, 0}};
  EXPECT_THROW(Graph(1, loop), ModelError);
  const std::vector<Graph::Edge> one{{0, 1}};
  EXPECT_THROW(Graph(3, one), ModelError);
  const std::vector<Graph::Edge> outside{{0, 5}};
  EXPECT_THROW(Graph(2, outside), ModelError);
}

TEST(Graph, WithEdge) {
  const Graph p = path_graph(3);
  const Graph tri = p.with_edge(2, 0);
  EXPECT_EQ(tri, complete_graph(3));
  EXPECT_EQ(p.with_edge(0, 1), p);
  EXPECT_EQ(p.with_edge(1, 0).fingerprint(), p.fingerprint());
  EXPECT_NE(tri.fingerprint(), p.fingerprint());
  EXPECT_EQ(p.fingerprint().size(), 16u);
}

TEST(SmallWorld, RingLatticeWithoutRewiring) {
  const Graph g = generate_small_world(50, 4, 0.0, 7);
  EXPECT_EQ(g.edge_count(), 100u);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(g.degree(i), 4);
  EXPECT_TRUE(g.has_edge(0, 49));
  EXPECT_TRUE(g.has_edge(0, 48));
}

TEST(SmallWorld, RewiringKeepsEdgeCountAndIsDeterministic) {
  const Graph a = generate_small_world(50, 4, 0.2, 1);
  EXPECT_EQ(a.edge_count(), 100u);
  EXPECT_EQ(a, generate_small_world(50, 4, 0.2, 1));
  EXPECT_NE(a, generate_small_world(50, 4, 0.2, 2));
  expect_simple(a);
}

TEST(SmallWorld, PropertyAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (double p : {0.1, 0.5, 1.0}) {
      const Graph g = generate_small_world(20, 4, p, seed);
      EXPECT_EQ(g.edge_count(), 40u);
      expect_simple(g);
    }
  }
}

TEST(SmallWorld, InvalidArguments) {
  EXPECT_THROW(generate_small_world(4, 4, 0.1, 1), ModelError);
  EXPECT_THROW(generate_small_world(10, 3, 0.1, 1), ModelError);
  EXPECT_THROW(generate_small_world(10, 0, 0.1, 1), ModelError);
  EXPECT_THROW(generate_small_world(10, 4, 1.5, 1), ModelError);
}

TEST(ScaleFree, EdgeCountsAndDeterminism) {
  const Graph g = generate_scale_free(50, 2, 1);
  EXPECT_EQ(g.edge_count(), 97u);
  EXPECT_EQ(g, generate_scale_free(50, 2, 1));
  const Graph tree = generate_scale_free(5, 1, 3);
  EXPECT_EQ(tree.edge_count(), 4u);
  EXPECT_TRUE(connected(tree));
  expect_simple(g);
}

TEST(ScaleFree, PropertyAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (int m : {1, 2, 3}) {
      const Graph g = generate_scale_free(30, m, seed);
      EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(m * (m - 1) / 2 + m * (30 - m)));
      EXPECT_TRUE(connected(g));
      expect_simple(g);
    }
  }
  EXPECT_THROW(generate_scale_free(2, 2, 1), ModelError);
  EXPECT_THROW(generate_scale_free(5, 0, 1), ModelError);
}

TEST(FourNodeGraphs, AreTheSixConnectedGraphs) {
  const std::size_t edges[] = {3, 3, 4, 4, 5, 6};
  for (int k = 1; k <= 6; ++k) {
    const Graph g = four_node_graph(k);
    EXPECT_EQ(g.node_count(), 4);
    EXPECT_EQ(g.edge_count(), edges[k - 1]);
    EXPECT_TRUE(connected(g));
  }
  // Star and path share an edge count but not a degree sequence.
  auto degrees = [](const Graph& g) {
    auto w = degree_weights(g).w;
    std::sort(w.begin(), w.end());
    return w;
  };
  EXPECT_NE(degrees(four_node_graph(1)), degrees(four_node_graph(2)));
  EXPECT_NE(degrees(four_node_graph(3)), degrees(four_node_graph(4)));
  EXPECT_THROW(four_node_graph(7), ModelError);
}

TEST(ContiguousUsa, Shape) {
  const Graph g = contiguous_usa();
  EXPECT_EQ(g.node_count(), 49);
  EXPECT_EQ(g.edge_count(), 107u);
  EXPECT_EQ(contiguous_usa_labels().size(), 49u);
  EXPECT_TRUE(connected(g));
  expect_simple(g);
  // Maine borders only New Hampshire.
  const auto labels = contiguous_usa_labels();
  const auto me = std::find(labels.begin(), labels.end(), "ME") - labels.begin();
  EXPECT_EQ(g.degree(static_cast<int>(me)), 1);
}

TEST(EdgeList, Examples) {
  EXPECT_EQ(read_edge_list("1 2\n2 3\n"), path_graph(3));
  EXPECT_EQ(read_edge_list("1 2\n2 1\n").edge_count(), 1u);
  EXPECT_THROW(read_edge_list("1 1\n"), ParseError);
}

TEST(EdgeList, CommentsHeaderAndErrors) {
  EXPECT_EQ(read_edge_list("# a comment\n\n1\t2\n  2 3  \n"), path_graph(3));
  EXPECT_EQ(read_edge_list("1 2\r\n2 3\r\n"), path_graph(3));
  EXPECT_THROW(read_edge_list("# nodes=4\n1 2\n2 3\n"), ModelError);  // node 4 isolated
  EXPECT_THROW(read_edge_list("# nodes=2\n1 2\n2 3\n"), ModelError);
  EXPECT_THROW(read_edge_list("1 x\n"), ParseError);
  EXPECT_THROW(read_edge_list("1\n"), ParseError);
  EXPECT_THROW(read_edge_list("0 1\n"), ParseError);
  EXPECT_THROW(read_edge_list("1 2 3\n"), ParseError);
  EXPECT_THROW(read_edge_list(""), ModelError);
  try {
    read_edge_list("1 2\n2 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EdgeList, RoundTrip) {
  for (const Graph& g : {path_graph(5), star_graph(6), generate_small_world(30, 4, 0.3, 9),
                         generate_scale_free(40, 3, 2), contiguous_usa()}) {
    const std::string text = write_edge_list(g);
    EXPECT_EQ(read_edge_list(text), g);
    EXPECT_EQ(write_edge_list(read_edge_list(text)), text);
  }
}
