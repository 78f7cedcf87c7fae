#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "anonet/circuit.h"
#include "anonet/engine.h"
#include "anonet/protocol.h"

namespace anonet {

// Standalone comparison gates over two input types (color 0 -> charge +1,
// color 1 -> charge -1). State is (charge, out): 3 bits.
struct GateState {
  std::int8_t charge = 0;
  bool out = false;

  AgentState pack() const;
  static GateState unpack(AgentState s);
};

ProtocolDef max_gate_protocol();
ProtocolDef min_gate_protocol();

// Per-gate registers an agent keeps for every gate on its color's path.
// `charge` is an absolute unit (+1 left input, -1 right input); `mark`
// records a pending change of the agent's own output at the gate below.
struct GateLevelState {
  std::int8_t charge = 0;
  bool out = false;
  bool mark = false;

  friend bool operator==(const GateLevelState&, const GateLevelState&) = default;
};

inline constexpr int kMaxCircuitDepth = 14;

struct CircuitAgentState {
  int initial_color = 0;
  int final_color = 0;
  int depth = 0;  // number of valid entries in `levels`
  std::array<GateLevelState, kMaxCircuitDepth> levels{};  // leaf's parent first

  friend bool operator==(const CircuitAgentState&, const CircuitAgentState&) = default;
};

struct CircuitEvent {
  enum class Kind {
    kCollision,  // opposite charges cancel at the gate
    kRetractCharged,    // pending decrement, agent still charged: charge and output drop
    kRetractCollided,   // pending decrement after the agent already collided: opposite unit restored
    kRegister,   // pending increment: agent's unit enters the gate
    kTransfer,   // a unit moves from an out=0 holder to an out=1 agent
  };
  Kind kind = Kind::kCollision;
  int gate = -1;
  int side = 0;  // +1 left input, -1 right input; 0 for collisions and transfers
};

// Compiled comparison circuit: each agent simulates the gates on the path
// from its color's leaf to the root. In plurality mode agents also carry a
// final-color register that follows the winning side of each gate.
class CircuitProtocol {
 public:
  enum class Mode { kCircuit, kPlurality };

  CircuitProtocol(ComparisonCircuit circuit, Mode mode);

  const ComparisonCircuit& circuit() const { return circuit_; }
  Mode mode() const { return mode_; }
  int color_bits() const { return color_bits_; }
  int budget_bits() const { return 4 * circuit_.depth() + 2 * color_bits_; }

  AgentState init(int color) const;
  StatePair interact(AgentState initiator, AgentState responder,
                     std::vector<CircuitEvent>* events = nullptr) const;
  Output output(AgentState s) const;
  bool quiescent(std::span<const AgentState> states) const;

  CircuitAgentState decode(AgentState s) const;
  AgentState encode(const CircuitAgentState& a) const;
  std::string describe(AgentState s) const;

  // Index of `gate` on `color`'s path, or -1.
  int level_of(int color, int gate) const { return level_of_[color][gate]; }
  // +1 if `color` feeds `gate` through its left child, -1 through the right.
  int side_of(int color, int gate) const { return side_[color][gate]; }
  const std::vector<int>& path(int color) const { return paths_[color]; }

 private:
  void resolve_marks(CircuitAgentState& a, std::vector<CircuitEvent>* events) const;
  bool act_at_gate(int gate, CircuitAgentState& x, CircuitAgentState& y,
                   std::vector<CircuitEvent>* events) const;
  void follow_evidence(CircuitAgentState& target, const CircuitAgentState& evidence) const;
  bool circuit_quiescent(std::span<const AgentState> states) const;

  ComparisonCircuit circuit_;
  Mode mode_;
  int color_bits_ = 0;
  std::vector<std::vector<int>> paths_;      // per leaf
  std::vector<std::vector<int>> level_of_;   // [leaf][node]
  std::vector<std::vector<int>> side_;       // [leaf][node]
};

ProtocolDef to_protocol_def(std::shared_ptr<const CircuitProtocol> circuit, std::string name);

// MIN gates are supported when their inputs only ever grow (leaves or other
// MIN gates); MAX gates accept any inputs. Throws ConfigError otherwise.
ProtocolDef compile_circuit(const ComparisonCircuit& circuit);
std::shared_ptr<const CircuitProtocol> make_circuit_protocol(const ComparisonCircuit& circuit);

// k >= 2; non-powers of two are padded with phantom leaves.
ProtocolDef plurality_protocol(int k);
std::shared_ptr<const CircuitProtocol> make_plurality_protocol(int k);

// Collision bookkeeping for one MAX gate G = max(A, B) whose inputs are
// leaves or MAX gates. Counts from a replayed trace; a, b are the settled
// outputs of G's children in the final configuration.
struct GateLedger {
  int gate = -1;
  std::int64_t A = 0, B = 0;    // agents initially charged on each side
  std::int64_t a = 0, b = 0;    // settled child outputs
  std::int64_t c1 = 0, d1 = 0;  // retractions of still-charged agents (left, right)
  std::int64_t c2 = 0, d2 = 0;  // retractions of already-collided agents (left, right)
  std::int64_t collisions = 0;
  std::int64_t ones = 0;        // agents with out = 1 at G
  std::int64_t transfers = 0;
  bool ok = false;

  std::string to_string() const;
};

// Checks collisions = c2 + d2 + min(a, b) and ones = max(a, b).
GateLedger collision_count_check(const CircuitProtocol& protocol, std::span<const int> input,
                                 std::span<const Activation> activations, int gate);

// Number of agents whose out bit at `gate` is 1.
std::int64_t ones_at_gate(const CircuitProtocol& protocol, std::span<const AgentState> states,
                          int gate);

}  // namespace anonet
