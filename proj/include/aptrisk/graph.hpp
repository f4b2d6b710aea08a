#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aptrisk {

/// Undirected simple graph of an organization's network.
///
/// Nodes are 0-based internally; every text format and user-facing message uses
/// 1-based ids. A Graph is immutable once built and always satisfies:
/// no self-loops, no duplicate edges, and every node has degree >= 1.
class Graph {
 public:
  using Edge = std::pair<int, int>;  // (u, v) with u < v, 0-based

  /// Builds a graph from 0-based edges. Orientation and duplicates collapse.
  /// Throws ModelError on self-loops, out-of-range ids or isolated nodes.
  Graph(int node_count, std::span<const Edge> edges);

  int node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Canonical edge list: u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Neighbours of node i in ascending order.
  std::span<const int> neighbors(int i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }

  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
  bool has_edge(int u, int v) const;

  /// CSR arrays, exposed for the integrator's inner loop.
  const std::vector<int>& offsets() const noexcept { return offsets_; }
  const std::vector<int>& adjacency() const noexcept { return adjacency_; }

  /// Copy of this graph with one more edge. Adding an existing edge yields an
  /// identical graph.
  Graph with_edge(int u, int v) const;

  /// 64-bit FNV-1a hash of (node count, canonical edges), as 16 hex digits.
  std::string fingerprint() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
};

/// Per-node security levels w. Here w_i is the degree of node i.
struct SecurityLevels {
  std::vector<double> w;

  std::size_t size() const noexcept { return w.size(); }
  double operator[](std::size_t i) const { return w[i]; }
};

SecurityLevels degree_weights(const Graph& g);

// Generators. All are seed-deterministic.

/// Watts-Strogatz: ring lattice with k/2 neighbours per side, each lattice
/// edge rewired with probability rewire_prob. Requires n > k >= 2, k even.
Graph generate_small_world(int n, int k, double rewire_prob, std::uint64_t seed);

/// Barabasi-Albert: m-node seed clique, then each new node attaches m distinct
/// edges by preferential attachment. Requires n > m >= 1.
Graph generate_scale_free(int n, int m, std::uint64_t seed);

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int n);  // node 0 is the centre
Graph complete_graph(int n);

/// The six connected graphs on four nodes, numbered 1..6:
/// star, path, paw, cycle, diamond, complete.
Graph four_node_graph(int index);

/// Adjacency of the 48 contiguous US states plus DC (49 nodes, 107 edges).
/// Node labels come from contiguous_usa_labels(), in the same order.
Graph contiguous_usa();
std::span<const std::string_view> contiguous_usa_labels();

// Edge-list text format: one "i j" pair of 1-based ids per line, '#' starts a
// comment line, blank lines are skipped, and "# nodes=N" sets the node count.

Graph read_edge_list(std::string_view text);
std::string write_edge_list(const Graph& g);

Graph load_edge_list(const std::string& path);

}  // namespace aptrisk
