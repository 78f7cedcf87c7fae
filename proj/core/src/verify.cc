#include "anonet/verify.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "anonet/error.h"
#include "anonet/oracle.h"

namespace anonet {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkipped: return "SKIPPED";
  }
  return "?";
}

Verdict parse_verdict(std::string_view text) {
  if (text == "PASS") return Verdict::kPass;
  if (text == "FAIL") return Verdict::kFail;
  if (text == "SKIPPED") return Verdict::kSkipped;
  throw ConfigError("unknown verdict: " + std::string(text));
}

std::vector<std::vector<int>> all_inputs(NodeId n, int colors) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  while (true) {
    out.push_back(cur);
    int i = n - 1;
    while (i >= 0 && cur[i] == colors - 1) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

namespace {

// Open-addressing set of fixed-width configurations stored contiguously.
class ConfigStore {
 public:
  explicit ConfigStore(std::size_t width) : width_(width), slots_(1024, -1) {}

  std::size_t size() const { return count_; }
  const AgentState* at(std::int64_t id) const { return pool_.data() + id * width_; }

  // Returns (id, inserted).
  std::pair<std::int64_t, bool> insert(const std::vector<AgentState>& c) {
    if ((count_ + 1) * 2 > slots_.size()) grow();
    std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash(c.data()) & mask;; i = (i + 1) & mask) {
      if (slots_[i] < 0) {
        slots_[i] = static_cast<std::int64_t>(count_);
        pool_.insert(pool_.end(), c.begin(), c.end());
        return {static_cast<std::int64_t>(count_++), true};
      }
      if (std::equal(c.begin(), c.end(), at(slots_[i]))) return {slots_[i], false};
    }
  }

 private:
  std::size_t hash(const AgentState* s) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t i = 0; i < width_; ++i) {
      h ^= s[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }

  void grow() {
    std::vector<std::int64_t> next(slots_.size() * 2, -1);
    std::size_t mask = next.size() - 1;
    for (std::size_t id = 0; id < count_; ++id) {
      std::size_t i = hash(at(static_cast<std::int64_t>(id))) & mask;
      while (next[i] >= 0) i = (i + 1) & mask;
      next[i] = static_cast<std::int64_t>(id);
    }
    slots_.swap(next);
  }

  std::size_t width_;
  std::vector<std::int64_t> slots_;
  std::vector<AgentState> pool_;
  std::size_t count_ = 0;
};

// Iterative Tarjan over a CSR graph; returns the component id of each vertex.
std::vector<std::int64_t> strongly_connected(const std::vector<std::int64_t>& offsets,
                                             const std::vector<std::int64_t>& targets,
                                             std::int64_t& component_count) {
  const std::int64_t n = static_cast<std::int64_t>(offsets.size()) - 1;
  std::vector<std::int64_t> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::int64_t> stack;
  std::vector<std::pair<std::int64_t, std::int64_t>> call;  // (vertex, next arc)
  std::int64_t counter = 0;
  component_count = 0;

  for (std::int64_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({root, offsets[root]});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, arc] = call.back();
      if (arc < offsets[v + 1]) {
        std::int64_t w = targets[arc++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, offsets[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::int64_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::int64_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = component_count;
        } while (w != done);
        ++component_count;
      }
    }
  }
  return comp;
}

std::string describe_config(const ProtocolDef& p, const AgentState* s, std::size_t n) {
  std::ostringstream out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << (p.describe ? p.describe(s[i]) : std::to_string(s[i])) << "->" << p.output(s[i]);
  }
  return out.str();
}

}  // namespace

VerifyResult verify_exhaustive(const ProtocolDef& protocol, const Graph& graph,
                               std::span<const int> input, const VerifyOptions& options) {
  const std::size_t n = static_cast<std::size_t>(graph.node_count());
  if (input.size() != n) throw ConfigError("input length does not match graph size");

  VerifyResult result;
  result.protocol = protocol.name;
  result.graph = graph.generator_tag();
  result.input.assign(input.begin(), input.end());
  result.expected = oracle_for_input(protocol, input);

  const bool canonical = graph.is_complete();
  auto canonicalize = [&](std::vector<AgentState>& c) {
    if (canonical) std::sort(c.begin(), c.end());
  };

  ConfigStore store(n);
  std::unordered_set<AgentState> agent_states;
  std::vector<std::int64_t> offsets{0}, targets;
  std::vector<AgentState> cur(n), next(n);

  cur = initial_configuration(protocol, input).states;
  canonicalize(cur);
  store.insert(cur);

  try {
    for (std::int64_t id = 0; id < static_cast<std::int64_t>(store.size()); ++id) {
      cur.assign(store.at(id), store.at(id) + n);
      if (options.collect_agent_states) agent_states.insert(cur.begin(), cur.end());
      for (const Edge& e : graph.edges()) {
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
          auto r = protocol.transition(cur[a], cur[b]);
          next = cur;
          next[a] = r.initiator;
          next[b] = r.responder;
          canonicalize(next);
          auto [to, inserted] = store.insert(next);
          targets.push_back(to);
          if (inserted && static_cast<std::int64_t>(store.size()) > options.guard) {
            result.verdict = Verdict::kSkipped;
            result.states_explored = static_cast<std::int64_t>(store.size());
            return result;
          }
        }
      }
      offsets.push_back(static_cast<std::int64_t>(targets.size()));
    }
  } catch (const ProtocolError& e) {
    result.verdict = Verdict::kFail;
    result.states_explored = static_cast<std::int64_t>(store.size());
    result.witness = std::string("protocol error: ") + e.what();
    return result;
  }
  result.states_explored = static_cast<std::int64_t>(store.size());

  std::int64_t components = 0;
  auto comp = strongly_connected(offsets, targets, components);
  std::vector<char> terminal(components, 1);
  const std::int64_t vertices = static_cast<std::int64_t>(store.size());
  for (std::int64_t v = 0; v < vertices; ++v) {
    for (std::int64_t arc = offsets[v]; arc < offsets[v + 1]; ++arc) {
      if (comp[targets[arc]] != comp[v]) terminal[comp[v]] = 0;
    }
  }
  result.terminal_components = std::count(terminal.begin(), terminal.end(), 1);

  result.verdict = Verdict::kPass;
  std::vector<Output> outputs(n);
  for (std::int64_t v = 0; v < vertices; ++v) {
    if (!terminal[comp[v]]) continue;
    const AgentState* s = store.at(v);
    for (std::size_t i = 0; i < n; ++i) outputs[i] = protocol.output(s[i]);
    if (!result.expected.matches(outputs)) {
      result.verdict = Verdict::kFail;
      result.witness = describe_config(protocol, s, n);
      break;
    }
  }

  if (options.collect_agent_states) {
    result.agent_states.assign(agent_states.begin(), agent_states.end());
    std::sort(result.agent_states.begin(), result.agent_states.end());
  }
  return result;
}

}  // namespace anonet
