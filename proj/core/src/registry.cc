#include "anonet/registry.h"

#include <algorithm>
#include <charconv>

#include "anonet/circuits.h"
#include "anonet/error.h"
#include "anonet/protocols.h"

namespace anonet {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("invalid seed: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

int parse_small(std::string_view text, std::string_view what) {
  auto v = parse_int(text, what);
  if (v < -(1 << 30) || v > (1 << 30)) throw ConfigError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

void expect_arity(const std::vector<std::string>& parts, std::size_t lo, std::size_t hi,
                  std::string_view spec) {
  if (parts.size() < lo || parts.size() > hi) {
    throw ConfigError("wrong number of parameters in protocol '" + std::string(spec) + "'");
  }
}

}  // namespace

ProtocolDef make_protocol(std::string_view spec) {
  if (spec.starts_with("circuit:")) {
    auto body = spec.substr(8);
    auto circuit = body.starts_with("(") ? ComparisonCircuit::parse(body)
                                         : ComparisonCircuit::from_file(std::string(body));
    return compile_circuit(circuit);
  }
  auto parts = split(spec, ':');
  const std::string& name = parts[0];
  if (name == "or") {
    expect_arity(parts, 1, 1, spec);
    return or_protocol();
  }
  if (name == "lsb") {
    expect_arity(parts, 2, 2, spec);
    return lsb_counter_protocol(parse_small(parts[1], "c"));
  }
  if (name == "threshold") {
    expect_arity(parts, 3, 4, spec);
    int a = parse_small(parts[1], "a");
    int b = parse_small(parts[2], "b");
    int c = parts.size() == 4 ? parse_small(parts[3], "c")
                              : std::max(1, bits_for(std::max<std::int64_t>(a, b)));
    return threshold_protocol(a, b, c);
  }
  if (name == "bit") {
    expect_arity(parts, 3, 3, spec);
    return bit_protocol(parse_small(parts[1], "j"), parse_small(parts[2], "n_max"));
  }
  if (name == "estimate") {
    expect_arity(parts, 2, 2, spec);
    return estimate_protocol(parse_small(parts[1], "n_max"));
  }
  if (name == "max-gate") {
    expect_arity(parts, 1, 1, spec);
    return max_gate_protocol();
  }
  if (name == "min-gate") {
    expect_arity(parts, 1, 1, spec);
    return min_gate_protocol();
  }
  if (name == "plurality") {
    expect_arity(parts, 2, 2, spec);
    int k = parse_small(parts[1], "k");
    if (k < 2) throw ConfigError("plurality needs k >= 2");
    return plurality_protocol(k);
  }
  throw ConfigError("unknown protocol '" + std::string(spec) + "'");
}

std::vector<int> parse_input(std::string_view spec, NodeId n, std::uint64_t seed,
                             int color_count) {
  if (spec.empty()) throw ConfigError("empty input spec");
  auto items = split(spec, ',');
  auto check_color = [&](std::int64_t c) {
    if (c < 0 || c >= color_count) {
      throw ConfigError("input color " + std::to_string(c) + " outside [0, " +
                        std::to_string(color_count) + ")");
    }
    return static_cast<int>(c);
  };

  if (spec.find(':') == std::string_view::npos) {
    std::vector<int> colors;
    for (auto& item : items) colors.push_back(check_color(parse_int(item, "color")));
    if (static_cast<NodeId>(colors.size()) != n) {
      throw ConfigError("input lists " + std::to_string(colors.size()) + " colors for " +
                        std::to_string(n) + " nodes");
    }
    return colors;
  }

  std::vector<std::int64_t> counts(color_count, 0);
  std::vector<char> given(color_count, 0);
  int rest = -1;
  std::int64_t total = 0;
  for (auto& item : items) {
    auto kv = split(item, ':');
    if (kv.size() != 2) throw ConfigError("input item '" + item + "' is not color:count");
    int c = check_color(parse_int(kv[0], "color"));
    if (given[c]) throw ConfigError("color " + kv[0] + " listed twice");
    given[c] = 1;
    if (kv[1] == "rest") {
      if (rest >= 0) throw ConfigError("only one color may take 'rest'");
      rest = c;
      continue;
    }
    auto count = parse_int(kv[1], "count");
    if (count < 0) throw ConfigError("negative count for color " + kv[0]);
    counts[c] = count;
    total += count;
  }
  if (rest >= 0) {
    if (total > n) throw ConfigError("counts exceed the node count");
    counts[rest] = n - total;
    total = n;
  }
  if (total != n) {
    throw ConfigError("counts sum to " + std::to_string(total) + " but the graph has " +
                      std::to_string(n) + " nodes");
  }

  std::vector<int> colors;
  colors.reserve(n);
  for (int c = 0; c < color_count; ++c) colors.insert(colors.end(), counts[c], c);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x696e7075u};
  Rng placement(seq);
  std::shuffle(colors.begin(), colors.end(), placement);
  return colors;
}

std::vector<std::string> expand_braces(std::string_view text) {
  auto open = text.find('{');
  if (open == std::string_view::npos) return {std::string(text)};
  auto close = text.find('}', open);
  if (close == std::string_view::npos) throw ConfigError("unbalanced '{' in " + std::string(text));

  std::string_view body = text.substr(open + 1, close - open - 1);
  std::vector<std::string> choices;
  if (auto dots = body.find(".."); dots != std::string_view::npos) {
    auto lo = parse_int(body.substr(0, dots), "range start");
    auto hi = parse_int(body.substr(dots + 2), "range end");
    if (hi < lo) throw ConfigError("empty range {" + std::string(body) + "}");
    for (auto v = lo; v <= hi; ++v) choices.push_back(std::to_string(v));
  } else {
    choices = split(body, ',');
  }

  // The leftmost group varies slowest.
  std::vector<std::string> out;
  const std::string head(text.substr(0, open));
  const auto tails = expand_braces(text.substr(close + 1));
  for (const auto& c : choices) {
    for (const auto& tail : tails) out.push_back(head + c + tail);
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (auto& item : split(text, ',')) {
    if (auto dots = item.find(".."); dots != std::string::npos) {
      auto lo = parse_seed(std::string_view(item).substr(0, dots));
      auto hi = parse_seed(std::string_view(item).substr(dots + 2));
      if (hi < lo || hi - lo >= 10'000'000) throw ConfigError("invalid seed range " + item);
      for (auto s = lo;; ++s) {
        seeds.push_back(s);
        if (s == hi) break;
      }
    } else {
      seeds.push_back(parse_seed(item));
    }
  }
  return seeds;
}

}  // namespace anonet
