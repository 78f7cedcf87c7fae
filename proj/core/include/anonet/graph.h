#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anonet {

using NodeId = std::int32_t;
using Rng = std::mt19937_64;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected simple connected graph on nodes 0..n-1. Edges are stored with
// u < v; the order of the edge list is part of the determinism contract
// (the scheduler indexes into it).
class Graph {
 public:
  // Validates the invariants: n >= 2, no self-loops, no duplicates,
  // connected. Throws ConfigError otherwise.
  Graph(NodeId n, std::vector<Edge> edges, std::string generator_tag);

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& generator_tag() const { return tag_; }

  std::vector<std::vector<NodeId>> adjacency() const;
  bool has_edge(NodeId a, NodeId b) const;
  bool is_complete() const;

  // Replaces edge slot i in place. Used by the rewiring policy, which
  // restores the old edge if connectivity breaks.
  void set_edge(std::size_t i, Edge e) { edges_[i] = e; }

 private:
  NodeId n_;
  std::vector<Edge> edges_;
  std::string tag_;
};

Edge make_edge(NodeId a, NodeId b);

// BFS connectivity over an explicit edge list.
bool is_connected(NodeId n, const std::vector<Edge>& edges);

// complete:n, cycle:n, path:n, star:n, gnp:n:p, file:path.
Graph build_graph(std::string_view spec, std::uint64_t seed);

// Plain-text edge list, one "u v" per line, '#' starts a comment.
Graph read_graph_file(const std::string& path);
void write_graph_file(const Graph& g, const std::string& path);

// Dynamic-network hook. kSwap performs one degree-preserving double edge
// swap every `period` activations and rolls it back if it disconnects.
struct RewirePolicy {
  enum class Kind { kNone, kSwap };
  Kind kind = Kind::kNone;
  std::int64_t period = 0;

  static RewirePolicy none() { return {}; }
  static RewirePolicy swap(std::int64_t period) { return {Kind::kSwap, period}; }
};

// "none" or "swap:p".
RewirePolicy parse_rewire_policy(std::string_view text);
std::string to_string(const RewirePolicy& policy);

// Applies one rewiring move; returns true if the graph changed.
// Always leaves `g` connected.
bool rewire(Graph& g, const RewirePolicy& policy, Rng& rng);

}  // namespace anonet
