#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anonet/graph.h"
#include "anonet/protocol.h"

namespace anonet {

// One edge firing. `time` is the continuous clock; `step` counts
// activations starting at 1.
struct Activation {
  std::int64_t step = 0;
  double time = 0.0;
  NodeId initiator = 0;
  NodeId responder = 0;

  friend bool operator==(const Activation&, const Activation&) = default;
};

// Superposition of independent rate-`rate` Poisson clocks, one per edge.
// Each call picks a uniform edge, a uniform orientation, then advances
// time by Exp(rate * |E|), drawing from `rng` in exactly that order.
class Scheduler {
 public:
  explicit Scheduler(double rate = 1.0);

  Activation next(const Graph& graph, Rng& rng);

  double rate() const { return rate_; }
  double now() const { return time_; }
  std::int64_t steps() const { return step_; }

 private:
  double rate_;
  double time_ = 0.0;
  std::int64_t step_ = 0;
};

struct Configuration {
  std::vector<AgentState> states;
  std::int64_t step = 0;
};

Configuration initial_configuration(const ProtocolDef& protocol, std::span<const int> colors);
std::vector<Output> outputs_of(const ProtocolDef& protocol, std::span<const AgentState> states);

struct RunLimits {
  std::int64_t max_steps = 10'000'000;
  // Defaults to 10 * n * |E| when unset.
  std::optional<std::int64_t> confirmation_window;
};

std::int64_t default_confirmation_window(const Graph& graph);

using StepObserver = std::function<void(const Activation& activation, StatePair before,
                                        StatePair after, std::span<const AgentState> states)>;

struct RunOptions {
  std::uint64_t seed = 0;
  RunLimits limits;
  RewirePolicy rewire;
  double rate = 1.0;
  bool record_trace = false;
  StepObserver observer;
};

struct RunResult {
  // Start of the final uninterrupted stretch of oracle-matching outputs.
  std::optional<std::int64_t> first_correct_step;
  bool stabilized = false;
  // True when stabilization was certified by the protocol's quiescence
  // predicate rather than by the confirmation window.
  bool quiescent = false;
  std::int64_t confirmation_window = 0;
  std::vector<Output> final_outputs;
  std::int64_t total_steps = 0;
  double elapsed_time = 0.0;
};

struct Trace {
  std::vector<int> input;
  std::vector<Activation> activations;
  std::vector<Output> final_outputs;
};

struct RunOutcome {
  RunResult result;
  Configuration final_configuration;
  std::optional<Trace> trace;
  Graph final_graph;
};

// Executes the protocol until the outputs have matched `expected` for a
// full confirmation window (or the quiescence predicate certifies them),
// or until max_steps. A stabilization failure is reported in the result;
// ProtocolError from the transition rule propagates.
RunOutcome run(const ProtocolDef& protocol, const Graph& graph, std::span<const int> input,
               const Expectation& expected, const RunOptions& options);

// Re-applies the recorded activations to the initial configuration.
Configuration replay(const ProtocolDef& protocol, std::span<const int> input,
                     std::span<const Activation> activations);

// "step time initiator responder" per line, then "outputs o0 o1 ...".
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

struct MeetingStats {
  std::int64_t trials = 0;
  double mean_steps = 0.0;
  double stderr_steps = 0.0;
  double mean_time = 0.0;
  double stderr_time = 0.0;
};

// Two tokens start on distinct uniform nodes. Whenever an activated edge
// touches a token's node the token crosses it (swap semantics); they meet
// when the edge joining their nodes fires.
MeetingStats measure_meeting_time(const Graph& graph, std::int64_t trials, std::uint64_t seed,
                                  double rate = 1.0);

}  // namespace anonet
