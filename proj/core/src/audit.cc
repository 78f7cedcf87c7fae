#include "anonet/audit.h"

#include <algorithm>
#include <unordered_set>

#include "anonet/engine.h"
#include "anonet/error.h"
#include "anonet/oracle.h"
#include "anonet/protocols.h"
#include "anonet/verify.h"

namespace anonet {

AuditResult audit_memory(const ProtocolDef& protocol, const std::vector<AuditInstance>& instances,
                         const AuditOptions& options) {
  std::unordered_set<AgentState> seen;
  AuditResult result;
  result.protocol = protocol.name;
  result.declared_bits = protocol.budget_bits;
  result.reference_bits = protocol.reference_bits;
  result.note = protocol.budget_note;

  for (const auto& inst : instances) {
    VerifyOptions vo;
    vo.guard = options.exhaustive_guard;
    vo.collect_agent_states = true;
    VerifyResult v;
    try {
      v = verify_exhaustive(protocol, inst.graph, inst.input, vo);
    } catch (const OracleError&) {
      continue;  // undefined function value (plurality tie); nothing to audit
    }
    if (v.verdict != Verdict::kSkipped) {
      if (!v.agent_states.empty()) ++result.exhaustive_instances;
      seen.insert(v.agent_states.begin(), v.agent_states.end());
      continue;
    }

    Expectation expected = oracle_for_input(protocol, inst.input);
    for (int s = 0; s < options.seeds; ++s) {
      for (int c : inst.input) seen.insert(protocol.init(c));
      RunOptions ro;
      ro.seed = static_cast<std::uint64_t>(s) + 1;
      ro.limits.max_steps = options.max_steps;
      ro.observer = [&seen](const Activation&, StatePair, StatePair after,
                            std::span<const AgentState>) {
        seen.insert(after.initiator);
        seen.insert(after.responder);
      };
      try {
        run(protocol, inst.graph, inst.input, expected, ro);
        ++result.sampled_runs;
      } catch (const ProtocolError&) {
        // Input outside the protocol's configured range; not a memory finding.
      }
    }
  }

  result.states = static_cast<std::int64_t>(seen.size());
  result.measured_bits = bits_for(result.states);
  result.ok = result.measured_bits <= result.declared_bits;
  if (!result.ok) {
    std::vector<AgentState> sorted(seen.begin(), seen.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size() && i < 16; ++i) {
      result.sample_states.push_back(protocol.describe ? protocol.describe(sorted[i])
                                                       : std::to_string(sorted[i]));
    }
  }
  return result;
}

std::vector<AuditInstance> default_audit_instances(const ProtocolDef& protocol,
                                                   std::uint64_t seed) {
  std::vector<AuditInstance> out;
  const int k = protocol.color_count;

  auto defined = [&](const std::vector<int>& input) {
    try {
      oracle_for_input(protocol, input);
      return true;
    } catch (const OracleError&) {
      return false;
    }
  };

  // Exhaustive family. On complete graphs node order is irrelevant, so only
  // sorted inputs are listed.
  for (NodeId n : {2, 3, 4, 5}) {
    Graph g = build_graph("complete:" + std::to_string(n), seed);
    for (auto& input : all_inputs(n, k)) {
      if (std::is_sorted(input.begin(), input.end()) && defined(input)) out.push_back({g, input});
    }
  }
  for (const char* spec : {"path:3", "cycle:4"}) {
    Graph g = build_graph(spec, seed);
    for (auto& input : all_inputs(g.node_count(), k)) {
      if (defined(input)) out.push_back({g, input});
    }
  }

  // Sampled family on larger graphs.
  Rng rng(seed);
  std::uniform_int_distribution<int> color(0, k - 1);
  for (const char* spec : {"complete:8", "cycle:10", "gnp:12:0.4", "complete:16"}) {
    Graph g = build_graph(spec, seed);
    for (int rep = 0; rep < 4;) {
      std::vector<int> input(g.node_count());
      for (auto& c : input) c = color(rng);
      if (!defined(input)) continue;
      out.push_back({g, input});
      ++rep;
    }
  }
  return out;
}

}  // namespace anonet
