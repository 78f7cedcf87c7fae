#include "anonet/circuit.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "anonet/error.h"

namespace anonet {
namespace {

// Intermediate parse tree; leaves carry their color, gates their children.
struct Sexp {
  int color = -1;
  GateKind kind = GateKind::kMax;
  std::vector<Sexp> children;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Sexp parse() {
    Sexp e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("circuit DSL: " + what + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view token() {
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';')
      ++pos_;
    if (start == pos_) fail("expected token");
    return text_.substr(start, pos_ - start);
  }

  Sexp expr() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] != '(') {
      auto tok = token();
      Sexp leaf;
      try {
        std::size_t used = 0;
        leaf.color = std::stoi(std::string(tok), &used);
        if (used != tok.size() || leaf.color < 0) throw std::invalid_argument("");
      } catch (const std::exception&) {
        fail("expected color id, got '" + std::string(tok) + "'");
      }
      return leaf;
    }
    ++pos_;
    auto op = token();
    Sexp gate;
    if (op == "max") {
      gate.kind = GateKind::kMax;
    } else if (op == "min") {
      gate.kind = GateKind::kMin;
    } else {
      fail("unknown gate '" + std::string(op) + "'");
    }
    gate.children.push_back(expr());
    gate.children.push_back(expr());
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')' (gates are binary)");
    ++pos_;
    return gate;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_leaves(const Sexp& e, std::vector<int>& out) {
  if (e.children.empty()) {
    out.push_back(e.color);
    return;
  }
  for (const auto& c : e.children) collect_leaves(c, out);
}

}  // namespace

ComparisonCircuit ComparisonCircuit::parse(std::string_view text) {
  Sexp tree = Parser(text).parse();
  if (tree.children.empty()) throw ConfigError("circuit DSL: root must be a gate");

  std::vector<int> leaves;
  collect_leaves(tree, leaves);
  const int k = static_cast<int>(leaves.size());
  std::vector<int> sorted = leaves;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < k; ++i) {
    if (sorted[i] != i) {
      if (i > 0 && sorted[i] == sorted[i - 1]) {
        throw ConfigError("circuit DSL: duplicate leaf color " + std::to_string(sorted[i]));
      }
      throw ConfigError("circuit DSL: leaves must be exactly the colors 0.." +
                        std::to_string(k - 1));
    }
  }

  ComparisonCircuit c;
  c.leaf_count_ = k;
  c.nodes_.resize(k);
  for (auto& n : c.nodes_) n.is_leaf = true;

  std::function<int(const Sexp&)> build = [&](const Sexp& e) -> int {
    if (e.children.empty()) return e.color;
    int l = build(e.children[0]);
    int r = build(e.children[1]);
    Node g;
    g.kind = e.kind;
    g.left = l;
    g.right = r;
    c.nodes_.push_back(g);
    int id = static_cast<int>(c.nodes_.size()) - 1;
    c.nodes_[l].parent = id;
    c.nodes_[r].parent = id;
    return id;
  };
  c.root_ = build(tree);
  c.finalize(k);
  return c;
}

ComparisonCircuit ComparisonCircuit::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open circuit file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ComparisonCircuit ComparisonCircuit::complete_max_tree(int k) {
  if (k < 2) throw ConfigError("complete MAX tree needs k >= 2");
  int leaves = 1;
  while (leaves < k) leaves *= 2;

  ComparisonCircuit c;
  c.leaf_count_ = leaves;
  c.nodes_.resize(leaves);
  for (auto& n : c.nodes_) n.is_leaf = true;
  std::vector<int> layer(leaves);
  for (int i = 0; i < leaves; ++i) layer[i] = i;
  while (layer.size() > 1) {
    std::vector<int> next;
    for (std::size_t i = 0; i < layer.size(); i += 2) {
      Node g;
      g.kind = GateKind::kMax;
      g.left = layer[i];
      g.right = layer[i + 1];
      c.nodes_.push_back(g);
      int id = static_cast<int>(c.nodes_.size()) - 1;
      c.nodes_[g.left].parent = id;
      c.nodes_[g.right].parent = id;
      next.push_back(id);
    }
    layer = std::move(next);
  }
  c.root_ = layer[0];
  c.finalize(k);
  return c;
}

void ComparisonCircuit::finalize(int color_count) {
  color_count_ = color_count;
  depth_ = height(root_);
}

std::vector<int> ComparisonCircuit::path(int color) const {
  std::vector<int> p;
  for (int id = nodes_.at(color).parent; id >= 0; id = nodes_[id].parent) p.push_back(id);
  return p;
}

std::vector<int> ComparisonCircuit::leaves_under(int id) const {
  if (nodes_[id].is_leaf) return {id};
  auto l = leaves_under(nodes_[id].left);
  auto r = leaves_under(nodes_[id].right);
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

int ComparisonCircuit::leftmost_leaf(int id) const {
  while (!nodes_[id].is_leaf) id = nodes_[id].left;
  return id;
}

int ComparisonCircuit::height(int id) const {
  if (nodes_[id].is_leaf) return 0;
  return 1 + std::max(height(nodes_[id].left), height(nodes_[id].right));
}

std::int64_t ComparisonCircuit::evaluate_node(int id, std::span<const std::int64_t> counts) const {
  const Node& n = nodes_[id];
  if (n.is_leaf) return id < static_cast<int>(counts.size()) ? counts[id] : 0;
  auto a = evaluate_node(n.left, counts);
  auto b = evaluate_node(n.right, counts);
  return n.kind == GateKind::kMax ? std::max(a, b) : std::min(a, b);
}

std::int64_t ComparisonCircuit::evaluate(std::span<const std::int64_t> counts) const {
  return evaluate_node(root_, counts);
}

std::string ComparisonCircuit::to_string(int id) const {
  const Node& n = nodes_[id];
  if (n.is_leaf) return std::to_string(id);
  return std::string("(") + (n.kind == GateKind::kMax ? "max " : "min ") + to_string(n.left) +
         " " + to_string(n.right) + ")";
}

std::string ComparisonCircuit::to_string() const { return to_string(root_); }

}  // namespace anonet
