#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anonet/protocol.h"

namespace anonet {

// Per-color agent counts; colors outside [0, color_count) are rejected.
std::vector<std::int64_t> color_counts(std::span<const int> input, int color_count);

// Ground truth by direct arithmetic on the counts. For binary functions
// counts[0] is r. Throws OracleError on a plurality tie.
Expectation oracle_value(const FunctionSpec& function, std::span<const std::int64_t> counts);

// Convenience: counts the input first.
Expectation oracle_for_input(const ProtocolDef& protocol, std::span<const int> input);

std::string to_string(const Expectation& e);

}  // namespace anonet
