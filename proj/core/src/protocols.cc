#include "anonet/protocols.h"

#include <algorithm>
#include <cstdlib>

#include "anonet/error.h"

namespace anonet {

int bits_for(std::int64_t values) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < values) ++bits;
  return bits;
}

int level_count(int n_max) {
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  return bits_for(n_max) + 1;
}

ProtocolDef or_protocol() {
  ProtocolDef p;
  p.name = "or";
  p.function = fn::Or{};
  p.budget_bits = p.reference_bits = 1;
  p.init = [](int color) -> AgentState { return color != 0 ? 1 : 0; };
  p.transition = [](AgentState a, AgentState b) {
    AgentState m = std::max(a, b);
    return StatePair{m, m};
  };
  p.output = [](AgentState s) -> Output { return static_cast<Output>(s); };
  p.quiescent = [](std::span<const AgentState> states) {
    return std::all_of(states.begin(), states.end(), [&](AgentState s) { return s == states[0]; });
  };
  p.describe = [](AgentState s) { return std::to_string(s); };
  return p;
}

ProtocolDef lsb_counter_protocol(int c) {
  if (c < 1 || c > 30) throw ConfigError("lsb counter width c must be in [1, 30]");
  const std::uint32_t mask = (std::uint32_t{1} << c) - 1;

  ProtocolDef p;
  p.name = "lsb:" + std::to_string(c);
  p.function = fn::LowBits{c};
  p.budget_bits = p.reference_bits = c + 1;
  p.init = [](int color) {
    return color == 0 ? ParityState{1, true}.pack() : ParityState{0, false}.pack();
  };
  p.transition = [mask](AgentState a, AgentState b) {
    auto x = ParityState::unpack(a);
    auto y = ParityState::unpack(b);
    if (x.active && y.active) {
      std::uint32_t sum = (x.counter + y.counter) & mask;
      return StatePair{ParityState{sum, true}.pack(), ParityState{sum, false}.pack()};
    }
    if (x.active != y.active) {
      // The passive party adopts the counter and becomes the active one.
      std::uint32_t carried = x.active ? x.counter : y.counter;
      return StatePair{ParityState{carried, y.active}.pack(),
                       ParityState{carried, x.active}.pack()};
    }
    return StatePair{a, b};
  };
  p.output = [](AgentState s) -> Output { return ParityState::unpack(s).counter; };
  p.quiescent = [](std::span<const AgentState> states) {
    int active = 0;
    auto first = ParityState::unpack(states[0]).counter;
    for (auto s : states) {
      auto st = ParityState::unpack(s);
      active += st.active;
      if (st.counter != first) return false;
    }
    return active <= 1;
  };
  p.describe = [](AgentState s) {
    auto st = ParityState::unpack(s);
    return "(" + std::to_string(st.counter) + "," + (st.active ? "A" : "P") + ")";
  };
  return p;
}

ProtocolDef threshold_protocol(int a, int b, int c) {
  if (c < 1 || c > 29) throw ConfigError("threshold counter width c must be in [1, 29]");
  const int limit = 1 << c;
  if (a < 1 || b < 1 || a > limit || b > limit) {
    throw ConfigError("threshold needs 1 <= a, b <= 2^c");
  }

  ProtocolDef p;
  p.name = "threshold:" + std::to_string(a) + ":" + std::to_string(b) + ":" + std::to_string(c);
  p.function = fn::Threshold{a, b};
  p.budget_bits = p.reference_bits = c + 2;
  p.init = [a, b](int color) {
    return color == 0 ? ThresholdState{b, true}.pack() : ThresholdState{-a, true}.pack();
  };
  p.transition = [](AgentState sa, AgentState sb) {
    auto x = ThresholdState::unpack(sa);
    auto y = ThresholdState::unpack(sb);
    // The weak party takes the strong counter and the strong status.
    auto copy_into = [](ThresholdState strong_side, bool weak_first) {
      ThresholdState promoted{strong_side.counter, true};
      ThresholdState demoted{strong_side.counter, false};
      return weak_first ? StatePair{promoted.pack(), demoted.pack()}
                        : StatePair{demoted.pack(), promoted.pack()};
    };

    if (x.strong && y.strong) {
      const bool xz = x.counter == 0, yz = y.counter == 0;
      if (!xz && !yz && (x.counter > 0) != (y.counter > 0)) {
        if (std::abs(x.counter) != std::abs(y.counter)) {
          return StatePair{ThresholdState{x.counter + y.counter, true}.pack(),
                           ThresholdState{0, false}.pack()};
        }
        return StatePair{ThresholdState{0, false}.pack(), ThresholdState{0, true}.pack()};
      }
      // A zero-valued strong agent yields to a nonzero strong one as if weak.
      if (xz && !yz) return copy_into(y, true);
      if (yz && !xz) return copy_into(x, false);
      return StatePair{sb, sa};
    }
    if (x.strong != y.strong) {
      return x.strong ? copy_into(x, false) : copy_into(y, true);
    }
    return StatePair{sb, sa};
  };
  p.output = [](AgentState s) -> Output { return ThresholdState::unpack(s).counter > 0 ? 1 : 0; };
  p.quiescent = [](std::span<const AgentState> states) {
    bool all_pos = true, all_nonpos = true;
    for (auto s : states) {
      auto st = ThresholdState::unpack(s);
      if (st.counter > 0) {
        all_nonpos = false;
      } else {
        all_pos = false;
      }
    }
    return all_pos || all_nonpos;
  };
  p.describe = [](AgentState s) {
    auto st = ThresholdState::unpack(s);
    return "(" + std::to_string(st.counter) + "," + (st.strong ? "S" : "W") + ")";
  };
  return p;
}

namespace {

// Shared dynamics of the bit-extraction and estimator protocols. Active
// tokens at the same level merge pairwise; two 1-colored tokens promote
// one of them to the next level. All other meetings swap the two records
// so that tokens perform random walks.
StatePair bit_dynamics(BitState x, BitState y, int levels) {
  if (x.active && y.active && x.level == y.level) {
    if (x.color && y.color) {
      if (x.level + 1 >= levels) {
        throw ProtocolError("bit-counting token would exceed level " +
                            std::to_string(levels - 1) + "; population exceeds n_max");
      }
      BitState stay = x, up = y;
      stay.color = false;
      up.color = true;
      up.level = static_cast<std::uint8_t>(x.level + 1);
      return {stay.pack(), up.pack()};
    }
    BitState keep = x, drop = y;
    keep.color = x.color != y.color;
    drop.color = false;
    drop.active = false;
    return {keep.pack(), drop.pack()};
  }
  if (!x.active && !y.active) return {x.pack(), y.pack()};
  return {y.pack(), x.pack()};
}

}  // namespace

ProtocolDef bit_protocol(int j, int n_max) {
  const int levels = level_count(n_max);
  if (levels > 200) throw ConfigError("n_max too large");
  if (j < 0 || j >= levels) {
    throw ConfigError("bit index j must be in [0, " + std::to_string(levels) + ")");
  }
  const int level_bits = bits_for(levels);

  ProtocolDef p;
  p.name = "bit:" + std::to_string(j) + ":" + std::to_string(n_max);
  p.function = fn::Bit{j};
  p.budget_bits = level_bits + 3;
  p.reference_bits = level_bits + 2;
  p.budget_note = "+1 output register so agents away from level j retain the answer";
  p.init = [j](int color) {
    BitState s;
    if (color == 0) {
      s.color = true;
      s.active = true;
      s.out = j == 0;
    }
    return s.pack();
  };
  p.transition = [j, levels](AgentState a, AgentState b) {
    auto next = bit_dynamics(BitState::unpack(a), BitState::unpack(b), levels);
    auto x = BitState::unpack(next.initiator);
    auto y = BitState::unpack(next.responder);
    const auto at_j = [j](const BitState& s) { return s.active && s.level == j; };
    // Observe a level-j token; a level-j token reports its own color.
    if (at_j(x)) {
      x.out = x.color;
      y.out = at_j(y) ? y.color : x.color;
    } else if (at_j(y)) {
      y.out = y.color;
      x.out = y.color;
    }
    return StatePair{x.pack(), y.pack()};
  };
  p.output = [](AgentState s) -> Output { return BitState::unpack(s).out ? 1 : 0; };
  p.describe = [](AgentState s) {
    auto st = BitState::unpack(s);
    return "(" + std::to_string(st.color) + "," + (st.active ? "A" : "P") + ",l" +
           std::to_string(st.level) + ",o" + std::to_string(st.out) + ")";
  };
  return p;
}

ProtocolDef estimate_protocol(int n_max) {
  const int levels = level_count(n_max);
  if (levels > 200) throw ConfigError("n_max too large");
  const int level_bits = bits_for(levels);

  ProtocolDef p;
  p.name = "estimate:" + std::to_string(n_max);
  p.function = fn::Estimate{};
  p.budget_bits = p.reference_bits = level_bits + 2 + bits_for(levels + 1);
  p.init = [](int color) {
    BitState s;
    if (color == 0) {
      s.color = true;
      s.active = true;
      s.est = 1;
    }
    return s.pack();
  };
  p.transition = [levels](AgentState a, AgentState b) {
    auto next = bit_dynamics(BitState::unpack(a), BitState::unpack(b), levels);
    auto x = BitState::unpack(next.initiator);
    auto y = BitState::unpack(next.responder);
    std::uint8_t seen = std::max(x.est, y.est);
    if (x.active) seen = std::max<std::uint8_t>(seen, x.level + 1);
    if (y.active) seen = std::max<std::uint8_t>(seen, y.level + 1);
    x.est = y.est = seen;
    return StatePair{x.pack(), y.pack()};
  };
  p.output = [](AgentState s) -> Output {
    auto st = BitState::unpack(s);
    return st.est == 0 ? kEmptyEstimate : st.est - 1;
  };
  p.describe = [](AgentState s) {
    auto st = BitState::unpack(s);
    return "(" + std::to_string(st.color) + "," + (st.active ? "A" : "P") + ",l" +
           std::to_string(st.level) + ",e" + std::to_string(st.est) + ")";
  };
  return p;
}

}  // namespace anonet
