#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anonet/engine.h"
#include "anonet/graph.h"
#include "anonet/protocol.h"

namespace anonet {

enum class Verdict { kPass, kFail, kSkipped };

std::string to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

struct VerifyOptions {
  std::int64_t guard = 10'000'000;  // maximum configurations explored
  bool collect_agent_states = false;
};

struct VerifyResult {
  std::string protocol;
  std::string graph;
  std::vector<int> input;
  Verdict verdict = Verdict::kSkipped;
  std::int64_t states_explored = 0;
  Expectation expected;
  std::int64_t terminal_components = 0;
  // Human-readable description of a bad terminal configuration (or the
  // protocol error hit during exploration) when the verdict is FAIL.
  std::string witness;
  // Sorted distinct per-agent states seen in reachable configurations,
  // filled when VerifyOptions::collect_agent_states is set.
  std::vector<AgentState> agent_states;
};

// Explores every configuration reachable from the input under all ordered
// edge activations and checks that every terminal strongly connected
// component consists only of configurations matching the oracle. Complete
// graphs are explored up to node relabeling.
VerifyResult verify_exhaustive(const ProtocolDef& protocol, const Graph& graph,
                               std::span<const int> input, const VerifyOptions& options = {});

// All color assignments of n nodes over `colors` colors, in lexicographic order.
std::vector<std::vector<int>> all_inputs(NodeId n, int colors);

}  // namespace anonet
