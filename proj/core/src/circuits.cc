#include "anonet/circuits.h"

#include <algorithm>
#include <sstream>
#include <utility>

#include "anonet/error.h"
#include "anonet/protocols.h"

namespace anonet {
namespace {

std::uint64_t charge_code(std::int8_t c) { return c == 0 ? 0u : (c > 0 ? 1u : 2u); }
std::int8_t charge_from_code(std::uint64_t code) {
  return code == 1 ? std::int8_t{1} : (code == 2 ? std::int8_t{-1} : std::int8_t{0});
}

bool has_opposite_charges(std::span<const AgentState> states) {
  bool pos = false, neg = false;
  for (auto s : states) {
    auto g = GateState::unpack(s);
    pos |= g.charge > 0;
    neg |= g.charge < 0;
  }
  return pos && neg;
}

ProtocolDef gate_protocol(GateKind kind) {
  const bool is_max = kind == GateKind::kMax;
  ProtocolDef p;
  p.name = is_max ? "max-gate" : "min-gate";
  p.function = is_max ? FunctionSpec{fn::MaxGate{}} : FunctionSpec{fn::MinGate{}};
  p.budget_bits = p.reference_bits = 3;
  p.init = [is_max](int color) {
    return GateState{static_cast<std::int8_t>(color == 0 ? 1 : -1), is_max}.pack();
  };
  p.transition = [is_max](AgentState a, AgentState b) {
    auto x = GateState::unpack(a);
    auto y = GateState::unpack(b);
    if (x.charge != 0 && x.charge == -y.charge) {
      // The responder records the collision: MAX loses a one, MIN gains one.
      return StatePair{GateState{0, x.out}.pack(), GateState{0, !is_max}.pack()};
    }
    return StatePair{b, a};
  };
  p.output = [](AgentState s) -> Output { return GateState::unpack(s).out ? 1 : 0; };
  p.quiescent = [](std::span<const AgentState> states) { return !has_opposite_charges(states); };
  p.describe = [](AgentState s) {
    auto g = GateState::unpack(s);
    return "(" + std::to_string(g.charge) + "," + std::to_string(g.out) + ")";
  };
  return p;
}

}  // namespace

AgentState GateState::pack() const { return charge_code(charge) | (AgentState{out} << 2); }

GateState GateState::unpack(AgentState s) {
  return {charge_from_code(s & 3u), ((s >> 2) & 1u) != 0};
}

ProtocolDef max_gate_protocol() { return gate_protocol(GateKind::kMax); }
ProtocolDef min_gate_protocol() { return gate_protocol(GateKind::kMin); }

CircuitProtocol::CircuitProtocol(ComparisonCircuit circuit, Mode mode)
    : circuit_(std::move(circuit)), mode_(mode) {
  if (circuit_.depth() > kMaxCircuitDepth) {
    throw ConfigError("circuit depth " + std::to_string(circuit_.depth()) + " exceeds " +
                      std::to_string(kMaxCircuitDepth));
  }
  color_bits_ = std::max(1, bits_for(circuit_.leaf_count()));
  if (budget_bits() > 64) throw ConfigError("circuit state does not fit in 64 bits");

  for (std::size_t id = 0; id < circuit_.nodes().size(); ++id) {
    const auto& n = circuit_.nodes()[id];
    if (n.is_leaf || n.kind != GateKind::kMin) continue;
    for (int child : {n.left, n.right}) {
      if (circuit_.is_gate(child) && circuit_.node(child).kind != GateKind::kMin) {
        throw ConfigError("unsupported composition: MIN gate over a MAX gate in " +
                          circuit_.to_string());
      }
    }
  }

  const int leaves = circuit_.leaf_count();
  const int nodes = static_cast<int>(circuit_.nodes().size());
  paths_.resize(leaves);
  level_of_.assign(leaves, std::vector<int>(nodes, -1));
  side_.assign(leaves, std::vector<int>(nodes, 0));
  for (int leaf = 0; leaf < leaves; ++leaf) {
    paths_[leaf] = circuit_.path(leaf);
    int below = leaf;
    for (std::size_t idx = 0; idx < paths_[leaf].size(); ++idx) {
      int g = paths_[leaf][idx];
      level_of_[leaf][g] = static_cast<int>(idx);
      side_[leaf][g] = circuit_.node(g).left == below ? 1 : -1;
      below = g;
    }
  }
}

CircuitAgentState CircuitProtocol::decode(AgentState s) const {
  CircuitAgentState a;
  const AgentState mask = (AgentState{1} << color_bits_) - 1;
  a.initial_color = static_cast<int>(s & mask);
  a.final_color = static_cast<int>((s >> color_bits_) & mask);
  a.depth = static_cast<int>(paths_[a.initial_color].size());
  int shift = 2 * color_bits_;
  for (int i = 0; i < a.depth; ++i, shift += 4) {
    auto bits = (s >> shift) & 0xFu;
    a.levels[i] = {charge_from_code(bits & 3u), ((bits >> 2) & 1u) != 0, ((bits >> 3) & 1u) != 0};
  }
  return a;
}

AgentState CircuitProtocol::encode(const CircuitAgentState& a) const {
  AgentState s = static_cast<AgentState>(a.initial_color) |
                 (static_cast<AgentState>(a.final_color) << color_bits_);
  int shift = 2 * color_bits_;
  for (int i = 0; i < a.depth; ++i, shift += 4) {
    const auto& l = a.levels[i];
    s |= (charge_code(l.charge) | (AgentState{l.out} << 2) | (AgentState{l.mark} << 3)) << shift;
  }
  return s;
}

std::string CircuitProtocol::describe(AgentState s) const {
  auto a = decode(s);
  std::ostringstream out;
  out << "c" << a.initial_color << "/f" << a.final_color;
  for (int i = 0; i < a.depth; ++i) {
    const auto& l = a.levels[i];
    out << " [" << int{l.charge} << "," << l.out << (l.mark ? ",m" : "") << "]";
  }
  return out.str();
}

AgentState CircuitProtocol::init(int color) const {
  if (color < 0 || color >= circuit_.color_count()) {
    throw ConfigError("color " + std::to_string(color) + " is not a leaf of " +
                      circuit_.to_string());
  }
  CircuitAgentState a;
  a.initial_color = a.final_color = color;
  a.depth = static_cast<int>(paths_[color].size());
  for (int i = 0; i < a.depth; ++i) {
    const int gate = paths_[color][i];
    const bool registered = i == 0 || a.levels[i - 1].out;
    auto& l = a.levels[i];
    if (registered) {
      l.charge = static_cast<std::int8_t>(side_[color][gate]);
      l.out = circuit_.node(gate).kind == GateKind::kMax;
    }
  }
  return encode(a);
}

Output CircuitProtocol::output(AgentState s) const {
  if (mode_ == Mode::kPlurality) {
    const AgentState mask = (AgentState{1} << color_bits_) - 1;
    return static_cast<Output>((s >> color_bits_) & mask);
  }
  auto a = decode(s);
  return a.levels[a.depth - 1].out ? 1 : 0;
}

// Applies pending changes of the agent's own output at the gate below,
// highest gate first. A change that would flip this gate's output waits
// while the agent still has an unresolved change pending one level up.
void CircuitProtocol::resolve_marks(CircuitAgentState& a,
                                    std::vector<CircuitEvent>* events) const {
  const auto& path = paths_[a.initial_color];
  for (int i = a.depth - 1; i >= 1; --i) {
    auto& l = a.levels[i];
    if (!l.mark) continue;
    const int gate = path[i];
    const int side = side_[a.initial_color][gate];
    const bool is_max = circuit_.node(gate).kind == GateKind::kMax;
    const bool has_parent = i + 1 < a.depth;
    const bool parent_free = !has_parent || !a.levels[i + 1].mark;
    auto emit = [&](CircuitEvent::Kind k) {
      if (events) events->push_back({k, gate, side});
    };

    if (a.levels[i - 1].out) {
      // Child output rose: the agent's unit enters this gate.
      if (l.charge != 0 || l.out) {
        throw ProtocolError("register on an already registered agent: " + describe(encode(a)));
      }
      if (is_max) {
        if (!parent_free) continue;
        l.out = true;
        if (has_parent) a.levels[i + 1].mark = true;
      }
      l.charge = static_cast<std::int8_t>(side);
      l.mark = false;
      emit(CircuitEvent::Kind::kRegister);
      continue;
    }

    // Child output fell: the agent's unit leaves this gate.
    if (l.charge == side) {
      if (!l.out) throw ProtocolError("charged agent with out=0: " + describe(encode(a)));
      if (!parent_free) continue;
      l.charge = 0;
      l.out = false;
      l.mark = false;
      if (has_parent) a.levels[i + 1].mark = true;
      emit(CircuitEvent::Kind::kRetractCharged);
    } else if (l.charge == 0) {
      l.charge = static_cast<std::int8_t>(-side);
      l.mark = false;
      emit(CircuitEvent::Kind::kRetractCollided);
    }
    // charge == -side: waits for a collision or a partner to hand the unit to.
  }
}

bool CircuitProtocol::act_at_gate(int gate, CircuitAgentState& x, CircuitAgentState& y,
                                  std::vector<CircuitEvent>* events) const {
  const int ix = level_of_[x.initial_color][gate];
  const int iy = level_of_[y.initial_color][gate];
  auto& lx = x.levels[ix];
  auto& ly = y.levels[iy];
  const bool is_max = circuit_.node(gate).kind == GateKind::kMax;
  auto parent_free = [](const CircuitAgentState& a, int i) {
    return i + 1 >= a.depth || !a.levels[i + 1].mark;
  };
  auto mark_parent = [](CircuitAgentState& a, int i) {
    if (i + 1 < a.depth) a.levels[i + 1].mark = true;
  };

  if (lx.charge != 0 && lx.charge == -ly.charge) {
    // One out bit flips per collision: MAX drops a one, MIN gains one. The
    // responder takes the flip when it can.
    const bool want = !is_max;
    CircuitAgentState* flipper = nullptr;
    int fi = -1;
    if (ly.out != want && parent_free(y, iy)) {
      flipper = &y;
      fi = iy;
    } else if (lx.out != want && parent_free(x, ix)) {
      flipper = &x;
      fi = ix;
    }
    if (flipper) {
      lx.charge = ly.charge = 0;
      flipper->levels[fi].out = want;
      mark_parent(*flipper, fi);
      if (events) events->push_back({CircuitEvent::Kind::kCollision, gate, 0});
      return true;
    }
  }
  if (!is_max) return false;

  auto receptive = [](const GateLevelState& l) { return l.charge == 0 && l.out && !l.mark; };

  // A unit restored onto an agent whose out is already 0 moves to an agent
  // still showing out = 1.
  auto stranded = [](const GateLevelState& l) { return l.charge != 0 && !l.out; };
  if (stranded(lx) && receptive(ly)) {
    std::swap(lx.charge, ly.charge);
    if (events) events->push_back({CircuitEvent::Kind::kTransfer, gate, 0});
    return true;
  }
  if (stranded(ly) && receptive(lx)) {
    std::swap(lx.charge, ly.charge);
    if (events) events->push_back({CircuitEvent::Kind::kTransfer, gate, 0});
    return true;
  }

  // A pending retraction on an agent that already holds the opposite unit
  // restores that unit on the partner instead.
  auto blocked = [&](const CircuitAgentState& a, int i) {
    const auto& l = a.levels[i];
    const int side = side_[a.initial_color][gate];
    return i >= 1 && l.mark && !a.levels[i - 1].out && l.charge == -side;
  };
  auto delegate = [&](CircuitAgentState& w, int iw, GateLevelState& target) {
    const int side = side_[w.initial_color][gate];
    target.charge = static_cast<std::int8_t>(-side);
    w.levels[iw].mark = false;
    if (events) events->push_back({CircuitEvent::Kind::kRetractCollided, gate, side});
  };
  if (blocked(x, ix) && receptive(ly)) {
    delegate(x, ix, ly);
    return true;
  }
  if (blocked(y, iy) && receptive(lx)) {
    delegate(y, iy, lx);
    return true;
  }
  return false;
}

void CircuitProtocol::follow_evidence(CircuitAgentState& target,
                                      const CircuitAgentState& evidence) const {
  const int f = target.final_color;
  const auto& path = paths_[f];
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const int gate = *it;
    const int ie = level_of_[evidence.initial_color][gate];
    if (ie < 0) break;
    const int unit = evidence.levels[ie].charge;
    if (unit == 0 || unit == side_[f][gate]) continue;
    // The candidate sits on the side currently losing at this gate.
    if (side_[evidence.initial_color][gate] == unit) {
      target.final_color = evidence.initial_color;
    } else {
      const auto& g = circuit_.node(gate);
      target.final_color = circuit_.leftmost_leaf(unit > 0 ? g.left : g.right);
    }
    return;
  }
}

StatePair CircuitProtocol::interact(AgentState initiator, AgentState responder,
                                    std::vector<CircuitEvent>* events) const {
  auto x = decode(initiator);
  auto y = decode(responder);
  resolve_marks(x, events);
  resolve_marks(y, events);

  bool acted = false;
  const auto& px = paths_[x.initial_color];
  for (int i = 0; i < x.depth && !acted; ++i) {
    const int gate = px[i];
    if (level_of_[y.initial_color][gate] < 0) continue;
    acted = act_at_gate(gate, x, y, events);
  }
  if (!acted) std::swap(x, y);

  if (mode_ == Mode::kPlurality) {
    follow_evidence(x, x);
    follow_evidence(x, y);
    follow_evidence(y, y);
    follow_evidence(y, x);
  }
  return {encode(x), encode(y)};
}

bool CircuitProtocol::circuit_quiescent(std::span<const AgentState> states) const {
  const std::size_t nodes = circuit_.nodes().size();
  std::vector<char> pos(nodes, 0), neg(nodes, 0);
  for (auto s : states) {
    auto a = decode(s);
    const auto& path = paths_[a.initial_color];
    for (int i = 0; i < a.depth; ++i) {
      const auto& l = a.levels[i];
      if (l.mark) return false;
      if (l.charge > 0) pos[path[i]] = 1;
      if (l.charge < 0) neg[path[i]] = 1;
    }
  }
  for (std::size_t g = 0; g < nodes; ++g)
    if (pos[g] && neg[g]) return false;
  return true;
}

bool CircuitProtocol::quiescent(std::span<const AgentState> states) const {
  if (!circuit_quiescent(states)) return false;
  if (mode_ == Mode::kCircuit) return true;

  const int winner = static_cast<int>(output(states[0]));
  if (winner >= circuit_.leaf_count()) return false;
  for (auto s : states) {
    if (output(s) != winner) return false;
  }
  for (auto s : states) {
    auto a = decode(s);
    for (int gate : paths_[winner]) {
      const int i = level_of_[a.initial_color][gate];
      if (i >= 0 && a.levels[i].charge == -side_[winner][gate]) return false;
    }
  }
  return true;
}

ProtocolDef to_protocol_def(std::shared_ptr<const CircuitProtocol> circuit, std::string name) {
  ProtocolDef p;
  p.name = std::move(name);
  if (circuit->mode() == CircuitProtocol::Mode::kPlurality) {
    p.function = fn::Plurality{circuit->circuit().color_count()};
  } else {
    p.function = fn::Circuit{std::make_shared<ComparisonCircuit>(circuit->circuit())};
  }
  p.color_count = circuit->circuit().color_count();
  p.budget_bits = p.reference_bits = circuit->budget_bits();
  p.init = [circuit](int color) { return circuit->init(color); };
  p.transition = [circuit](AgentState a, AgentState b) { return circuit->interact(a, b); };
  p.output = [circuit](AgentState s) { return circuit->output(s); };
  p.quiescent = [circuit](std::span<const AgentState> s) { return circuit->quiescent(s); };
  p.describe = [circuit](AgentState s) { return circuit->describe(s); };
  return p;
}

std::shared_ptr<const CircuitProtocol> make_circuit_protocol(const ComparisonCircuit& circuit) {
  return std::make_shared<const CircuitProtocol>(circuit, CircuitProtocol::Mode::kCircuit);
}

ProtocolDef compile_circuit(const ComparisonCircuit& circuit) {
  return to_protocol_def(make_circuit_protocol(circuit), "circuit:" + circuit.to_string());
}

std::shared_ptr<const CircuitProtocol> make_plurality_protocol(int k) {
  return std::make_shared<const CircuitProtocol>(ComparisonCircuit::complete_max_tree(k),
                                                 CircuitProtocol::Mode::kPlurality);
}

ProtocolDef plurality_protocol(int k) {
  return to_protocol_def(make_plurality_protocol(k), "plurality:" + std::to_string(k));
}

std::int64_t ones_at_gate(const CircuitProtocol& protocol, std::span<const AgentState> states,
                          int gate) {
  std::int64_t ones = 0;
  for (auto s : states) {
    auto a = protocol.decode(s);
    const int i = protocol.level_of(a.initial_color, gate);
    if (i >= 0 && a.levels[i].out) ++ones;
  }
  return ones;
}

std::string GateLedger::to_string() const {
  std::ostringstream out;
  out << "gate " << gate << ": A=" << A << " B=" << B << " a=" << a << " b=" << b
      << " c1=" << c1 << " c2=" << c2 << " d1=" << d1 << " d2=" << d2
      << " collisions=" << collisions << " (expect " << c2 + d2 + std::min(a, b) << ")"
      << " ones=" << ones << " (expect " << std::max(a, b) << ")"
      << " transfers=" << transfers << (ok ? " OK" : " VIOLATED");
  return out.str();
}

GateLedger collision_count_check(const CircuitProtocol& protocol, std::span<const int> input,
                                 std::span<const Activation> activations, int gate) {
  const auto& circuit = protocol.circuit();
  if (!circuit.is_gate(gate) || circuit.node(gate).kind != GateKind::kMax) {
    throw ConfigError("collision ledger applies to MAX gates only");
  }
  const auto& g = circuit.node(gate);
  for (int child : {g.left, g.right}) {
    if (circuit.is_gate(child) && circuit.node(child).kind != GateKind::kMax) {
      throw ConfigError("collision ledger needs leaf or MAX inputs");
    }
  }

  GateLedger ledger;
  ledger.gate = gate;
  std::vector<AgentState> states;
  for (int color : input) {
    states.push_back(protocol.init(color));
    auto a = protocol.decode(states.back());
    const int i = protocol.level_of(color, gate);
    if (i >= 0 && a.levels[i].charge != 0) {
      (protocol.side_of(color, gate) > 0 ? ledger.A : ledger.B) += 1;
    }
  }

  std::vector<CircuitEvent> events;
  for (const auto& act : activations) {
    events.clear();
    auto next = protocol.interact(states[act.initiator], states[act.responder], &events);
    states[act.initiator] = next.initiator;
    states[act.responder] = next.responder;
    for (const auto& e : events) {
      if (e.gate != gate) continue;
      switch (e.kind) {
        case CircuitEvent::Kind::kCollision: ++ledger.collisions; break;
        case CircuitEvent::Kind::kRetractCharged: ++(e.side > 0 ? ledger.c1 : ledger.d1); break;
        case CircuitEvent::Kind::kRetractCollided: ++(e.side > 0 ? ledger.c2 : ledger.d2); break;
        case CircuitEvent::Kind::kTransfer: ++ledger.transfers; break;
        case CircuitEvent::Kind::kRegister: break;
      }
    }
  }

  auto settled = [&](int child) -> std::int64_t {
    if (circuit.is_gate(child)) return ones_at_gate(protocol, states, child);
    return std::count(input.begin(), input.end(), child);
  };
  ledger.a = settled(g.left);
  ledger.b = settled(g.right);
  ledger.ones = ones_at_gate(protocol, states, gate);
  ledger.ok = ledger.collisions == ledger.c2 + ledger.d2 + std::min(ledger.a, ledger.b) &&
              ledger.ones == std::max(ledger.a, ledger.b);
  return ledger;
}

}  // namespace anonet
