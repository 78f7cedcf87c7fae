#include "support.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace anonet::testing {

std::int64_t count_color(const std::vector<int>& input, int color) {
  std::int64_t k = 0;
  for (int c : input) k += c == color;
  return k;
}

int naive_bit(std::int64_t r, int j) {
  std::string bits;
  for (auto v = r; v > 0; v /= 2) bits.push_back(static_cast<char>('0' + v % 2));
  return j < static_cast<int>(bits.size()) ? bits[j] - '0' : 0;
}

int naive_floor_log2(std::int64_t r) {
  int e = -1;
  while (r > 0) {
    r /= 2;
    ++e;
  }
  return e;
}

bool naive_threshold(std::int64_t r, std::int64_t n, std::int64_t a, std::int64_t b) {
  // r / (n - r) > a / b, cross-multiplied.
  return r * b > a * (n - r);
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  std::int64_t eval(const std::vector<std::int64_t>& counts) {
    skip();
    if (s[i] == '(') {
      ++i;
      skip();
      std::string op = s.substr(i, 3);
      i += 3;
      auto x = eval(counts);
      auto y = eval(counts);
      skip();
      ++i;  // ')'
      return op == "max" ? std::max(x, y) : std::min(x, y);
    }
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    auto leaf = std::stoul(s.substr(start, i - start));
    return leaf < counts.size() ? counts[leaf] : 0;
  }
};

std::string build(Rng& rng, std::vector<int>& leaves, std::size_t lo, std::size_t hi, int depth) {
  if (hi - lo == 1) return std::to_string(leaves[lo]);
  std::uniform_int_distribution<std::size_t> cut(lo + 1, hi - 1);
  std::size_t mid = cut(rng);
  return "(max " + build(rng, leaves, lo, mid, depth - 1) + " " +
         build(rng, leaves, mid, hi, depth - 1) + ")";
}

int tree_depth(const std::string& s) {
  int d = 0, best = 0;
  for (char c : s) {
    if (c == '(') best = std::max(best, ++d);
    if (c == ')') --d;
  }
  return best;
}

}  // namespace

std::int64_t naive_circuit_value(const std::string& text, const std::vector<std::int64_t>& counts) {
  Cursor c{text};
  return c.eval(counts);
}

std::string random_max_circuit(Rng& rng, int k, int max_depth) {
  if (k < 2 || k > (1 << max_depth)) throw std::invalid_argument("bad circuit shape");
  std::vector<int> leaves(k);
  std::iota(leaves.begin(), leaves.end(), 0);
  while (true) {
    std::shuffle(leaves.begin(), leaves.end(), rng);
    auto text = build(rng, leaves, 0, leaves.size(), max_depth);
    if (tree_depth(text) <= max_depth) return text;
  }
}

bool naive_connected(const Graph& g) {
  const int n = g.node_count();
  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  for (auto e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = 1;
  std::vector<char> seen(n, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (int w = 0; w < n; ++w) {
      if (m[queue[q]][w] && !seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return static_cast<int>(queue.size()) == n;
}

std::vector<int> layout(const std::vector<std::int64_t>& counts, Rng& rng) {
  std::vector<int> out;
  for (std::size_t c = 0; c < counts.size(); ++c) out.insert(out.end(), counts[c], static_cast<int>(c));
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

std::string family_spec(const std::string& family, int n) {
  if (family == "gnp") return "gnp:" + std::to_string(n) + ":0.4";
  return family + ":" + std::to_string(n);
}

}  // namespace anonet::testing
