#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anonet/graph.h"
#include "anonet/protocol.h"

namespace anonet {

struct AuditInstance {
  Graph graph;
  std::vector<int> input;
};

struct AuditOptions {
  std::int64_t exhaustive_guard = 200'000;  // per instance; larger ones are sampled
  int seeds = 5;                           // sampled runs per non-exhaustive instance
  std::int64_t max_steps = 2'000'000;
};

struct AuditResult {
  std::string protocol;
  std::int64_t states = 0;  // distinct reachable agent states observed
  int measured_bits = 0;    // ceil(log2 states)
  int declared_bits = 0;
  int reference_bits = 0;
  std::string note;
  int exhaustive_instances = 0;
  int sampled_runs = 0;
  bool ok = false;
  // A few observed states rendered by the protocol, listed on failure.
  std::vector<std::string> sample_states;
};

// Collects every agent state reachable in the given instances: exhaustively
// when the configuration space is small, otherwise from sampled runs.
AuditResult audit_memory(const ProtocolDef& protocol, const std::vector<AuditInstance>& instances,
                         const AuditOptions& options = {});

// A default family for the protocol: every input on small complete, cycle
// and path graphs, plus random inputs on larger graphs.
std::vector<AuditInstance> default_audit_instances(const ProtocolDef& protocol,
                                                   std::uint64_t seed = 1);

}  // namespace anonet
