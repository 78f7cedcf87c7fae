#pragma once

#include <cstdint>

#include "anonet/protocol.h"

namespace anonet {

// Binary-input protocols. Input color 0 marks a "red" agent; r is the
// number of red agents.

struct ParityState {
  std::uint32_t counter = 0;  // in [0, 2^c)
  bool active = false;

  AgentState pack() const { return (AgentState{counter} << 1) | (active ? 1u : 0u); }
  static ParityState unpack(AgentState s) {
    return {static_cast<std::uint32_t>(s >> 1), (s & 1u) != 0};
  }
};

struct ThresholdState {
  std::int32_t counter = 0;  // in [-a, b]
  bool strong = false;

  AgentState pack() const {
    return (AgentState{static_cast<std::uint32_t>(counter)} << 1) | (strong ? 1u : 0u);
  }
  static ThresholdState unpack(AgentState s) {
    return {static_cast<std::int32_t>(static_cast<std::uint32_t>(s >> 1)), (s & 1u) != 0};
  }
};

struct BitState {
  bool color = false;
  bool active = false;
  bool out = false;        // observed answer register (bit protocol)
  std::uint8_t level = 0;  // in [0, L)
  std::uint8_t est = 0;    // estimator: 0 = nothing seen, else highest level + 1

  AgentState pack() const {
    return AgentState{color} | (AgentState{active} << 1) | (AgentState{out} << 2) |
           (AgentState{level} << 3) | (AgentState{est} << 11);
  }
  static BitState unpack(AgentState s) {
    return {(s & 1u) != 0, (s & 2u) != 0, (s & 4u) != 0, static_cast<std::uint8_t>(s >> 3),
            static_cast<std::uint8_t>(s >> 11)};
  }
};

// Number of levels a bit-counting token may occupy: ceil(log2 n_max) + 1.
int level_count(int n_max);
int bits_for(std::int64_t values);  // ceil(log2 values), 0 for values <= 1

// 1 bit: both parties take the larger bit. Computes OR of the input bits.
ProtocolDef or_protocol();

// c+1 bits: counts red agents modulo 2^c.
ProtocolDef lsb_counter_protocol(int c);

// c+2 bits: outputs 1 iff b*r > a*(n-r), for 1 <= a, b <= 2^c.
ProtocolDef threshold_protocol(int a, int b, int c);

// ceil(log2 L)+3 bits: outputs bit j of r, for populations up to n_max.
ProtocolDef bit_protocol(int j, int n_max);

// Outputs floor(log2 r) (kEmptyEstimate when r = 0), so 2^output is within a
// factor 2 of r.
ProtocolDef estimate_protocol(int n_max);

}  // namespace anonet
