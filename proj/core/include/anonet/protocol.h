#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "anonet/circuit.h"

namespace anonet {

// Packed per-agent memory. Each protocol defines its own field layout and
// declares how many of the low bits it may use.
using AgentState = std::uint64_t;
using Output = std::int64_t;

struct StatePair {
  AgentState initiator = 0;
  AgentState responder = 0;

  friend bool operator==(const StatePair&, const StatePair&) = default;
};

// The symmetric function a protocol is meant to compute. Binary functions
// count "red" agents, i.e. agents whose input color is 0.
namespace fn {
struct Or {};                               // [some agent holds color 1]
struct LowBits { int c = 1; };              // r mod 2^c
struct Threshold { int a = 1, b = 1; };     // [b*r > a*(n-r)]
struct Bit { int j = 0; };                  // bit j of r
struct Estimate {};                         // floor(log2 r), -1 when r = 0
struct MaxGate {};                          // max(#color0, #color1) agents output 1
struct MinGate {};                          // min(#color0, #color1) agents output 1
struct Circuit { std::shared_ptr<const ComparisonCircuit> circuit; };  // root value ones
struct Plurality { int k = 2; };            // argmax color (ties undefined)
}  // namespace fn

using FunctionSpec = std::variant<fn::Or, fn::LowBits, fn::Threshold, fn::Bit, fn::Estimate,
                                  fn::MaxGate, fn::MinGate, fn::Circuit, fn::Plurality>;

// What a correct stabilized configuration looks like: either every agent
// outputs `value` (consensus), or exactly `value` agents output 1 (the
// unary encoding used by comparison gates).
struct Expectation {
  enum class Kind { kConsensus, kOnesCount };
  Kind kind = Kind::kConsensus;
  Output value = 0;

  static Expectation consensus(Output v) { return {Kind::kConsensus, v}; }
  static Expectation ones(Output v) { return {Kind::kOnesCount, v}; }

  bool matches(std::span<const Output> outputs) const;

  friend bool operator==(const Expectation&, const Expectation&) = default;
};

// Estimator output reported when no agent is red.
inline constexpr Output kEmptyEstimate = -1;

// A protocol value: immutable after construction, shareable across runs.
// `transition` is a total deterministic function on valid state pairs; the
// first component of its argument and result belongs to the initiator.
struct ProtocolDef {
  std::string name;
  FunctionSpec function;
  int color_count = 2;
  int budget_bits = 0;
  // The bound the construction is designed to meet before any documented
  // extra registers; equals budget_bits when there is no deviation.
  int reference_bits = 0;
  std::string budget_note;

  std::function<AgentState(int color)> init;
  std::function<StatePair(AgentState initiator, AgentState responder)> transition;
  std::function<Output(AgentState)> output;
  // Optional exact certificate that no further activation can change any
  // output.
  std::function<bool(std::span<const AgentState>)> quiescent;
  std::function<std::string(AgentState)> describe;

  StatePair apply(AgentState initiator, AgentState responder) const {
    return transition(initiator, responder);
  }
};

}  // namespace anonet
