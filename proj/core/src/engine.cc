#include "anonet/engine.h"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "anonet/error.h"

namespace anonet {

bool Expectation::matches(std::span<const Output> outputs) const {
  if (kind == Kind::kConsensus) {
    for (Output o : outputs)
      if (o != value) return false;
    return true;
  }
  Output ones = 0;
  for (Output o : outputs) ones += o;
  return ones == value;
}

Scheduler::Scheduler(double rate) : rate_(rate) {
  if (!(rate > 0.0)) throw ConfigError("interaction rate must be positive");
}

Activation Scheduler::next(const Graph& graph, Rng& rng) {
  const auto& edges = graph.edges();
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  const Edge& e = edges[pick(rng)];
  bool flip = std::bernoulli_distribution(0.5)(rng);
  std::exponential_distribution<double> hold(rate_ * static_cast<double>(edges.size()));
  time_ += hold(rng);
  ++step_;
  return Activation{step_, time_, flip ? e.v : e.u, flip ? e.u : e.v};
}

Configuration initial_configuration(const ProtocolDef& protocol, std::span<const int> colors) {
  Configuration c;
  c.states.reserve(colors.size());
  for (int color : colors) {
    if (color < 0 || color >= protocol.color_count) {
      throw ConfigError("input color " + std::to_string(color) + " invalid for protocol " +
                        protocol.name);
    }
    c.states.push_back(protocol.init(color));
  }
  return c;
}

std::vector<Output> outputs_of(const ProtocolDef& protocol, std::span<const AgentState> states) {
  std::vector<Output> out;
  out.reserve(states.size());
  for (auto s : states) out.push_back(protocol.output(s));
  return out;
}

std::int64_t default_confirmation_window(const Graph& graph) {
  return 10 * static_cast<std::int64_t>(graph.node_count()) *
         static_cast<std::int64_t>(graph.edge_count());
}

namespace {

// Tracks whether the current outputs satisfy the expectation in O(1) per
// changed agent.
class MatchTracker {
 public:
  MatchTracker(const Expectation& e, const std::vector<Output>& outputs) : e_(e) {
    for (Output o : outputs) add(o);
  }

  void replace(Output before, Output after) {
    remove(before);
    add(after);
  }

  bool matched() const {
    return e_.kind == Expectation::Kind::kConsensus ? mismatches_ == 0 : ones_ == e_.value;
  }

 private:
  void add(Output o) {
    if (o != e_.value) ++mismatches_;
    ones_ += o;
  }
  void remove(Output o) {
    if (o != e_.value) --mismatches_;
    ones_ -= o;
  }

  Expectation e_;
  std::int64_t mismatches_ = 0;
  Output ones_ = 0;
};

}  // namespace

RunOutcome run(const ProtocolDef& protocol, const Graph& graph, std::span<const int> input,
               const Expectation& expected, const RunOptions& options) {
  if (static_cast<NodeId>(input.size()) != graph.node_count()) {
    throw ConfigError("input has " + std::to_string(input.size()) + " colors for a graph with " +
                      std::to_string(graph.node_count()) + " nodes");
  }
  Configuration config = initial_configuration(protocol, input);
  auto& states = config.states;
  std::vector<Output> outputs = outputs_of(protocol, states);

  Graph g = graph;
  Rng rng(options.seed);
  Scheduler scheduler(options.rate);
  const std::int64_t window =
      options.limits.confirmation_window.value_or(default_confirmation_window(graph));
  const bool rewiring = options.rewire.kind != RewirePolicy::Kind::kNone;

  std::optional<Trace> trace;
  if (options.record_trace) trace.emplace(Trace{{input.begin(), input.end()}, {}, {}});

  MatchTracker tracker(expected, outputs);
  RunResult result;
  result.confirmation_window = window;

  std::optional<std::int64_t> matched_since;
  if (tracker.matched()) matched_since = 0;
  bool dirty = true;  // states changed since the last quiescence check

  auto check_quiescent = [&]() {
    if (!protocol.quiescent || !dirty) return false;
    dirty = false;
    return protocol.quiescent(states);
  };

  bool done = false;
  if (check_quiescent()) {
    result.quiescent = true;
    result.stabilized = matched_since.has_value();
    done = true;
  }

  std::int64_t step = 0;
  while (!done && step < options.limits.max_steps) {
    Activation act = scheduler.next(g, rng);
    step = act.step;
    StatePair before{states[act.initiator], states[act.responder]};
    StatePair after = protocol.transition(before.initiator, before.responder);
    if (after != before) {
      states[act.initiator] = after.initiator;
      states[act.responder] = after.responder;
      dirty = true;
      for (NodeId node : {act.initiator, act.responder}) {
        Output o = protocol.output(states[node]);
        if (o != outputs[node]) {
          tracker.replace(outputs[node], o);
          outputs[node] = o;
        }
      }
    }
    if (options.observer) options.observer(act, before, after, states);
    if (trace) trace->activations.push_back(act);
    if (rewiring && step % options.rewire.period == 0) rewire(g, options.rewire, rng);

    if (tracker.matched()) {
      if (!matched_since) matched_since = step;
      if (step - *matched_since >= window) {
        result.stabilized = true;
        done = true;
      } else if (check_quiescent()) {
        result.stabilized = true;
        result.quiescent = true;
        done = true;
      }
    } else {
      matched_since.reset();
      // A quiescent configuration with wrong outputs can never recover.
      if (step % graph.node_count() == 0 && check_quiescent()) {
        result.quiescent = true;
        done = true;
      }
    }
  }

  config.step = step;
  result.first_correct_step = matched_since;
  result.final_outputs = outputs;
  result.total_steps = step;
  result.elapsed_time = scheduler.now();
  if (trace) trace->final_outputs = outputs;
  return RunOutcome{std::move(result), std::move(config), std::move(trace), std::move(g)};
}

Configuration replay(const ProtocolDef& protocol, std::span<const int> input,
                     std::span<const Activation> activations) {
  Configuration config = initial_configuration(protocol, input);
  auto& s = config.states;
  for (const auto& a : activations) {
    auto next = protocol.transition(s[a.initiator], s[a.responder]);
    s[a.initiator] = next.initiator;
    s[a.responder] = next.responder;
    config.step = a.step;
  }
  return config;
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << "# input";
  for (int c : trace.input) out << ' ' << c;
  out << '\n';
  out << std::setprecision(17);
  for (const auto& a : trace.activations) {
    out << a.step << ' ' << a.time << ' ' << a.initiator << ' ' << a.responder << '\n';
  }
  out << "outputs";
  for (Output o : trace.final_outputs) out << ' ' << o;
  out << '\n';
}

Trace read_trace(std::istream& in) {
  Trace t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line.starts_with("# input")) {
      ls.ignore(7);
      for (int c; ls >> c;) t.input.push_back(c);
    } else if (line[0] == '#') {
      continue;
    } else if (line.starts_with("outputs")) {
      ls.ignore(7);
      for (Output o; ls >> o;) t.final_outputs.push_back(o);
    } else {
      Activation a;
      if (!(ls >> a.step >> a.time >> a.initiator >> a.responder)) {
        throw ConfigError("malformed trace line: " + line);
      }
      t.activations.push_back(a);
    }
  }
  return t;
}

MeetingStats measure_meeting_time(const Graph& graph, std::int64_t trials, std::uint64_t seed,
                                  double rate) {
  if (trials < 1) throw ConfigError("meeting-time measurement needs trials >= 1");
  Rng rng(seed);
  const NodeId n = graph.node_count();
  double sum_steps = 0, sum_steps2 = 0, sum_time = 0, sum_time2 = 0;

  for (std::int64_t t = 0; t < trials; ++t) {
    NodeId a = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
    NodeId b = std::uniform_int_distribution<NodeId>(0, n - 2)(rng);
    if (b >= a) ++b;
    Scheduler sched(rate);
    while (true) {
      Activation act = sched.next(graph, rng);
      NodeId x = act.initiator, y = act.responder;
      if ((x == a && y == b) || (x == b && y == a)) break;
      if (a == x) {
        a = y;
      } else if (a == y) {
        a = x;
      }
      if (b == x) {
        b = y;
      } else if (b == y) {
        b = x;
      }
    }
    double s = static_cast<double>(sched.steps());
    double tm = sched.now();
    sum_steps += s;
    sum_steps2 += s * s;
    sum_time += tm;
    sum_time2 += tm * tm;
  }

  MeetingStats st;
  st.trials = trials;
  const double k = static_cast<double>(trials);
  st.mean_steps = sum_steps / k;
  st.mean_time = sum_time / k;
  if (trials > 1) {
    double var_s = (sum_steps2 - k * st.mean_steps * st.mean_steps) / (k - 1);
    double var_t = (sum_time2 - k * st.mean_time * st.mean_time) / (k - 1);
    st.stderr_steps = std::sqrt(std::max(0.0, var_s) / k);
    st.stderr_time = std::sqrt(std::max(0.0, var_t) / k);
  }
  return st;
}

}  // namespace anonet
