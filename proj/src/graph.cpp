#include "aptrisk/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "aptrisk/error.hpp"
#include "aptrisk/random.hpp"

namespace aptrisk {

namespace {

std::vector<Graph::Edge> canonical_edges(int node_count, std::span<const Graph::Edge> edges) {
  std::vector<Graph::Edge> out;
  out.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count) {
      throw ModelError("edge {" + std::to_string(u + 1) + ", " + std::to_string(v + 1) +
                       "} references a node outside 1.." + std::to_string(node_count));
    }
    if (u == v) {
      throw ModelError("self-loop at node " + std::to_string(u + 1));
    }
    out.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Graph::Graph(int node_count, std::span<const Edge> edges) : node_count_(node_count) {
  if (node_count < 1) {
    throw ModelError("graph needs at least one node");
  }
  edges_ = canonical_edges(node_count, edges);

  std::vector<int> degree(node_count, 0);
  for (auto [u, v] : edges_) {
    ++degree[u];
    ++degree[v];
  }
  for (int i = 0; i < node_count; ++i) {
    if (degree[i] == 0) {
      throw ModelError("node " + std::to_string(i + 1) + " has degree 0");
    }
  }

  offsets_.assign(node_count + 1, 0);
  for (int i = 0; i < node_count; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges_) {
    adjacency_[fill[u]++] = v;
    adjacency_[fill[v]++] = u;
  }
  for (int i = 0; i < node_count; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

bool Graph::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::with_edge(int u, int v) const {
  std::vector<Edge> edges = edges_;
  edges.emplace_back(u, v);
  return Graph(node_count_, edges);
}

std::string Graph::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t value) {
    for (int b = 0; b < 8; ++b) {
      h ^= (value >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(node_count_));
  for (auto [u, v] : edges_) {
    mix(static_cast<std::uint64_t>(u));
    mix(static_cast<std::uint64_t>(v));
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[h & 0xfU];
    h >>= 4;
  }
  return out;
}

SecurityLevels degree_weights(const Graph& g) {
  SecurityLevels levels;
  levels.w.resize(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) levels.w[i] = g.degree(i);
  return levels;
}

Graph generate_small_world(int n, int k, double rewire_prob, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0 || n <= k) {
    throw ModelError("small-world generator needs n > k >= 2 with k even");
  }
  if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0)) {
    throw ModelError("rewire probability must lie in [0, 1]");
  }
  for (std::uint64_t attempt = seed;; ++attempt) {
    Rng rng(attempt);
    std::set<Graph::Edge> edges;
    std::vector<int> degree(n, k);
    auto key = [](int a, int b) { return Graph::Edge{std::min(a, b), std::max(a, b)}; };
    for (int i = 0; i < n; ++i) {
      for (int j = 1; j <= k / 2; ++j) edges.insert(key(i, (i + j) % n));
    }
    // Same sweep order as the original construction: lap j over every node.
    for (int j = 1; j <= k / 2; ++j) {
      for (int i = 0; i < n; ++i) {
        if (!rng.bernoulli(rewire_prob)) continue;
        const int old_target = (i + j) % n;
        if (!edges.contains(key(i, old_target))) continue;  // rewired away earlier
        if (degree[i] >= n - 1) continue;                    // no legal target left
        int target;
        do {
          target = rng.below(n);
        } while (target == i || edges.contains(key(i, target)));
        edges.erase(key(i, old_target));
        edges.insert(key(i, target));
        --degree[old_target];
        ++degree[target];
      }
    }
    if (std::find(degree.begin(), degree.end(), 0) != degree.end()) continue;
    std::vector<Graph::Edge> list(edges.begin(), edges.end());
    return Graph(n, list);
  }
}

Graph generate_scale_free(int n, int m, std::uint64_t seed) {
  if (m < 1 || n <= m) {
    throw ModelError("scale-free generator needs n > m >= 1");
  }
  Rng rng(seed);
  std::vector<Graph::Edge> edges;
  // Each endpoint appears once per incident edge, so a uniform pick from this
  // list is a degree-proportional pick.
  std::vector<int> endpoints;
  for (int u = 0; u < m; ++u) {
    for (int v = u + 1; v < m; ++v) {
      edges.emplace_back(u, v);
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  std::vector<int> targets;
  for (int node = m; node < n; ++node) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const int pick = endpoints.empty() ? rng.below(node)
                                         : endpoints[rng.below(static_cast<int>(endpoints.size()))];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) {
        targets.push_back(pick);
      }
    }
    for (int t : targets) {
      edges.emplace_back(t, node);
      endpoints.push_back(t);
      endpoints.push_back(node);
    }
  }
  return Graph(n, edges);
}

Graph path_graph(int n) {
  if (n < 2) throw ModelError("path graph needs at least 2 nodes");
  std::vector<Graph::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph cycle_graph(int n) {
  if (n < 3) throw ModelError("cycle graph needs at least 3 nodes");
  std::vector<Graph::Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, edges);
}

Graph star_graph(int n) {
  if (n < 2) throw ModelError("star graph needs at least 2 nodes");
  std::vector<Graph::Edge> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
  return Graph(n, edges);
}

Graph complete_graph(int n) {
  if (n < 2) throw ModelError("complete graph needs at least 2 nodes");
  std::vector<Graph::Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

Graph four_node_graph(int index) {
  std::vector<Graph::Edge> edges;
  switch (index) {
    case 1: edges = {{0, 1}, {0, 2}, {0, 3}}; break;                          // star
    case 2: edges = {{0, 1}, {1, 2}, {2, 3}}; break;                          // path
    case 3: edges = {{0, 1}, {0, 2}, {1, 2}, {2, 3}}; break;                  // paw
    case 4: edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}}; break;                  // cycle
    case 5: edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}; break;          // diamond
    case 6: edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}; break;  // K4
    default: throw ModelError("four-node graph index must be 1..6");
  }
  return Graph(4, edges);
}

namespace {

constexpr std::array<std::string_view, 49> kUsaLabels = {
    "AL", "AZ", "AR", "CA", "CO", "CT", "DE", "DC", "FL", "GA", "ID", "IL", "IN",
    "IA", "KS", "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE",
    "NV", "NH", "NJ", "NM", "NY", "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC",
    "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY"};

// Shared land borders; Four Corners point contacts are not counted.
constexpr std::array<std::pair<std::string_view, std::string_view>, 107> kUsaBorders = {{
    {"AL", "FL"}, {"AL", "GA"}, {"AL", "MS"}, {"AL", "TN"}, {"AZ", "CA"}, {"AZ", "NM"},
    {"AZ", "NV"}, {"AZ", "UT"}, {"AR", "LA"}, {"AR", "MO"}, {"AR", "MS"}, {"AR", "OK"},
    {"AR", "TN"}, {"AR", "TX"}, {"CA", "NV"}, {"CA", "OR"}, {"CO", "KS"}, {"CO", "NE"},
    {"CO", "NM"}, {"CO", "OK"}, {"CO", "UT"}, {"CO", "WY"}, {"CT", "MA"}, {"CT", "NY"},
    {"CT", "RI"}, {"DE", "MD"}, {"DE", "NJ"}, {"DE", "PA"}, {"DC", "MD"}, {"DC", "VA"},
    {"FL", "GA"}, {"GA", "NC"}, {"GA", "SC"}, {"GA", "TN"}, {"ID", "MT"}, {"ID", "NV"},
    {"ID", "OR"}, {"ID", "UT"}, {"ID", "WA"}, {"ID", "WY"}, {"IL", "IN"}, {"IL", "IA"},
    {"IL", "KY"}, {"IL", "MO"}, {"IL", "WI"}, {"IN", "KY"}, {"IN", "MI"}, {"IN", "OH"},
    {"IA", "MN"}, {"IA", "MO"}, {"IA", "NE"}, {"IA", "SD"}, {"IA", "WI"}, {"KS", "MO"},
    {"KS", "NE"}, {"KS", "OK"}, {"KY", "MO"}, {"KY", "OH"}, {"KY", "TN"}, {"KY", "VA"},
    {"KY", "WV"}, {"LA", "MS"}, {"LA", "TX"}, {"ME", "NH"}, {"MD", "PA"}, {"MD", "VA"},
    {"MD", "WV"}, {"MA", "NH"}, {"MA", "NY"}, {"MA", "RI"}, {"MA", "VT"}, {"MI", "OH"},
    {"MI", "WI"}, {"MN", "ND"}, {"MN", "SD"}, {"MN", "WI"}, {"MS", "TN"}, {"MO", "NE"},
    {"MO", "OK"}, {"MO", "TN"}, {"MT", "ND"}, {"MT", "SD"}, {"MT", "WY"}, {"NE", "SD"},
    {"NE", "WY"}, {"NV", "OR"}, {"NV", "UT"}, {"NH", "VT"}, {"NJ", "NY"}, {"NJ", "PA"},
    {"NM", "OK"}, {"NM", "TX"}, {"NY", "PA"}, {"NY", "VT"}, {"NC", "SC"}, {"NC", "TN"},
    {"NC", "VA"}, {"ND", "SD"}, {"OH", "PA"}, {"OH", "WV"}, {"OK", "TX"}, {"OR", "WA"},
    {"PA", "WV"}, {"SD", "WY"}, {"TN", "VA"}, {"UT", "WY"}, {"VA", "WV"},
}};

int usa_index(std::string_view label) {
  auto it = std::find(kUsaLabels.begin(), kUsaLabels.end(), label);
  return static_cast<int>(it - kUsaLabels.begin());
}

}  // namespace

Graph contiguous_usa() {
  std::vector<Graph::Edge> edges;
  edges.reserve(kUsaBorders.size());
  for (auto [a, b] : kUsaBorders) edges.emplace_back(usa_index(a), usa_index(b));
  return Graph(static_cast<int>(kUsaLabels.size()), edges);
}

std::span<const std::string_view> contiguous_usa_labels() { return kUsaLabels; }

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view token, long long& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

Graph read_edge_list(std::string_view text) {
  std::vector<Graph::Edge> edges;
  long long declared_nodes = -1;
  long long max_id = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      if (body.starts_with("nodes=")) {
        if (!parse_int(trim(body.substr(6)), declared_nodes) || declared_nodes < 1) {
          throw ParseError(line_no, "bad node-count header");
        }
      }
      continue;
    }
    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) throw ParseError(line_no, "expected two node ids");
    long long a = 0;
    long long b = 0;
    if (!parse_int(line.substr(0, split), a) || !parse_int(trim(line.substr(split)), b)) {
      throw ParseError(line_no, "expected two integer node ids");
    }
    if (a < 1 || b < 1) throw ParseError(line_no, "node ids are 1-based");
    if (a == b) throw ParseError(line_no, "self-loop at node " + std::to_string(a));
    if (std::max(a, b) > 1'000'000'000) throw ParseError(line_no, "node id too large");
    max_id = std::max({max_id, a, b});
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  long long n = max_id;
  if (declared_nodes > 0) {
    if (declared_nodes < max_id) {
      throw ModelError("header declares " + std::to_string(declared_nodes) +
                       " nodes but edge list uses id " + std::to_string(max_id));
    }
    n = declared_nodes;
  }
  if (n < 1) throw ModelError("edge list contains no edges");
  return Graph(static_cast<int>(n), edges);
}

std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "# nodes=" << g.node_count() << '\n';
  for (auto [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
  return out.str();
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open edge list '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_edge_list(buffer.str());
}

}  // namespace aptrisk
