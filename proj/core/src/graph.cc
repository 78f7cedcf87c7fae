#include "anonet/graph.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "anonet/error.h"

namespace anonet {
namespace {

constexpr int kGnpMaxAttempts = 1000;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

NodeId parse_node_count(std::string_view text, std::string_view spec) {
  NodeId n = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad node count in graph spec '" + std::string(spec) + "'");
  }
  if (n < 2) {
    throw ConfigError("graph spec '" + std::string(spec) + "' needs n >= 2");
  }
  return n;
}

}  // namespace

Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Graph::Graph(NodeId n, std::vector<Edge> edges, std::string generator_tag)
    : n_(n), edges_(std::move(edges)), tag_(std::move(generator_tag)) {
  if (n_ < 2) throw ConfigError("graph needs at least 2 nodes");
  std::set<Edge> seen;
  for (auto& e : edges_) {
    if (e.u == e.v) throw ConfigError("self-loop on node " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_) {
      throw ConfigError("edge endpoint out of range");
    }
    e = make_edge(e.u, e.v);
    if (!seen.insert(e).second) {
      throw ConfigError("duplicate edge " + std::to_string(e.u) + " " + std::to_string(e.v));
    }
  }
  if (!is_connected(n_, edges_)) throw ConfigError("graph '" + tag_ + "' is not connected");
}

std::vector<std::vector<NodeId>> Graph::adjacency() const {
  std::vector<std::vector<NodeId>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  auto e = make_edge(a, b);
  return std::find(edges_.begin(), edges_.end(), e) != edges_.end();
}

bool Graph::is_complete() const {
  return edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

bool is_connected(NodeId n, const std::vector<Edge>& edges) {
  if (n <= 0) return false;
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(n, 0);
  std::queue<NodeId> q;
  q.push(0);
  seen[0] = 1;
  NodeId reached = 1;
  while (!q.empty()) {
    NodeId x = q.front();
    q.pop();
    for (NodeId y : adj[x]) {
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        q.push(y);
      }
    }
  }
  return reached == n;
}

Graph build_graph(std::string_view spec, std::uint64_t seed) {
  auto parts = split(spec, ':');
  const auto& kind = parts[0];
  std::string tag(spec);

  if (kind == "file") {
    if (parts.size() < 2) throw ConfigError("file graph spec needs a path");
    // Paths may themselves contain ':'.
    return read_graph_file(std::string(spec.substr(5)));
  }
  if (parts.size() < 2) throw ConfigError("unparsable graph spec '" + tag + "'");

  NodeId n = parse_node_count(parts[1], spec);
  std::vector<Edge> edges;

  if (kind == "complete" && parts.size() == 2) {
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = a + 1; b < n; ++b) edges.push_back({a, b});
  } else if (kind == "cycle" && parts.size() == 2) {
    if (n < 3) throw ConfigError("cycle needs n >= 3");
    for (NodeId a = 0; a < n; ++a) edges.push_back(make_edge(a, (a + 1) % n));
  } else if (kind == "path" && parts.size() == 2) {
    for (NodeId a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1});
  } else if (kind == "star" && parts.size() == 2) {
    for (NodeId a = 1; a < n; ++a) edges.push_back({0, a});
  } else if (kind == "gnp" && parts.size() == 3) {
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(std::string(parts[2]), &used);
      if (used != parts[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("bad edge probability in '" + tag + "'");
    }
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("gnp probability must be in (0, 1]");
    Rng rng(seed);
    std::bernoulli_distribution coin(p);
    for (int attempt = 0; attempt < kGnpMaxAttempts; ++attempt) {
      edges.clear();
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
          if (coin(rng)) edges.push_back({a, b});
      if (is_connected(n, edges)) return Graph(n, std::move(edges), tag);
    }
    throw ConfigError("gnp graph '" + tag + "' not connected after " +
                      std::to_string(kGnpMaxAttempts) + " attempts");
  } else {
    throw ConfigError("unparsable graph spec '" + tag + "'");
  }
  return Graph(n, std::move(edges), tag);
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file '" + path + "'");
  std::vector<Edge> edges;
  NodeId max_node = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u = 0, v = 0;
    if (!(ls >> u)) continue;  // blank or comment-only line
    std::string extra;
    if (!(ls >> v) || (ls >> extra) || u < 0 || v < 0) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'u v'");
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    max_node = std::max<NodeId>(max_node, static_cast<NodeId>(std::max(u, v)));
  }
  return Graph(max_node + 1, std::move(edges), "file:" + path);
}

void write_graph_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write graph file '" + path + "'");
  out << "# " << g.generator_tag() << " n=" << g.node_count() << "\n";
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

RewirePolicy parse_rewire_policy(std::string_view text) {
  if (text == "none" || text.empty()) return RewirePolicy::none();
  if (text.starts_with("swap:")) {
    auto num = text.substr(5);
    std::int64_t p = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p);
    if (ec == std::errc() && ptr == num.data() + num.size() && p > 0) {
      return RewirePolicy::swap(p);
    }
  }
  throw ConfigError("bad rewire policy '" + std::string(text) + "' (expected none or swap:p)");
}

std::string to_string(const RewirePolicy& policy) {
  if (policy.kind == RewirePolicy::Kind::kNone) return "none";
  return "swap:" + std::to_string(policy.period);
}

bool rewire(Graph& g, const RewirePolicy& policy, Rng& rng) {
  if (policy.kind == RewirePolicy::Kind::kNone || g.edge_count() < 2) return false;

  std::uniform_int_distribution<std::size_t> pick(0, g.edge_count() - 1);
  std::size_t i = pick(rng);
  std::size_t j = pick(rng);
  bool cross = std::bernoulli_distribution(0.5)(rng);
  if (i == j) return false;

  Edge e1 = g.edges()[i];
  Edge e2 = g.edges()[j];
  // (a,b),(c,d) -> (a,d),(c,b) or (a,c),(b,d)
  NodeId a = e1.u, b = e1.v, c = e2.u, d = e2.v;
  Edge n1 = cross ? Edge{a, c} : Edge{a, d};
  Edge n2 = cross ? Edge{b, d} : Edge{c, b};
  if (n1.u == n1.v || n2.u == n2.v) return false;
  n1 = make_edge(n1.u, n1.v);
  n2 = make_edge(n2.u, n2.v);
  if (n1 == n2 || g.has_edge(n1.u, n1.v) || g.has_edge(n2.u, n2.v)) return false;

  g.set_edge(i, n1);
  g.set_edge(j, n2);
  if (!is_connected(g.node_count(), g.edges())) {
    g.set_edge(i, e1);
    g.set_edge(j, e2);
    return false;
  }
  return true;
}

}  // namespace anonet
