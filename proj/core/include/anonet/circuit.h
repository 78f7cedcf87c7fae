#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anonet {

enum class GateKind : std::uint8_t { kMax, kMin };

// Binary tree of MAX/MIN gates whose leaves are the colors 0..k-1, each
// appearing exactly once. Node 0..leaf_count()-1 are the leaves (node i is
// color i); gates follow.
class ComparisonCircuit {
 public:
  struct Node {
    bool is_leaf = false;
    GateKind kind = GateKind::kMax;
    int left = -1;   // child node ids, gates only
    int right = -1;
    int parent = -1;
  };

  // Parses the s-expression form, e.g. "(max (max 0 1) (min 2 3))".
  static ComparisonCircuit parse(std::string_view text);
  static ComparisonCircuit from_file(const std::string& path);

  // Complete MAX tree over `k` leaves. When k is not a power of two the
  // tree is padded to the next power of two with phantom leaves (colors
  // >= k that no agent holds).
  static ComparisonCircuit complete_max_tree(int k);

  int leaf_count() const { return leaf_count_; }
  // Number of colors agents may hold; differs from leaf_count() only for
  // padded trees.
  int color_count() const { return color_count_; }
  int root() const { return root_; }
  int depth() const { return depth_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_[id]; }
  bool is_gate(int id) const { return !nodes_[id].is_leaf; }
  std::size_t gate_count() const { return nodes_.size() - leaf_count_; }

  // Gates from the leaf's parent up to the root.
  std::vector<int> path(int color) const;
  // Leaf colors under node `id`.
  std::vector<int> leaves_under(int id) const;
  int leftmost_leaf(int id) const;
  int height(int id) const;  // 0 for leaves

  // Direct recursive evaluation on per-color counts (missing colors count 0).
  std::int64_t evaluate(std::span<const std::int64_t> counts) const;
  std::int64_t evaluate_node(int id, std::span<const std::int64_t> counts) const;

  std::string to_string() const;
  std::string to_string(int id) const;

 private:
  ComparisonCircuit() = default;
  void finalize(int color_count);

  std::vector<Node> nodes_;
  int leaf_count_ = 0;
  int color_count_ = 0;
  int root_ = -1;
  int depth_ = 0;
};

}  // namespace anonet
