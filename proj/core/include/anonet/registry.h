#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anonet/graph.h"
#include "anonet/protocol.h"

namespace anonet {

// or, lsb:c, threshold:a:b[:c], bit:j:nmax, estimate:nmax, max-gate,
// min-gate, plurality:k, circuit:<file> or circuit:<s-expression>.
// threshold without c uses the smallest c with a, b <= 2^c.
ProtocolDef make_protocol(std::string_view spec);

// Either an explicit comma-separated color list ("0,1,1,0") or
// "color:count" pairs ("0:5,1:3"), where one count may be "rest". Pairs
// are laid out in ascending color blocks and then shuffled by a generator
// derived from `seed`.
std::vector<int> parse_input(std::string_view spec, NodeId n, std::uint64_t seed,
                             int color_count);

// Expands "{a,b,c}" alternatives and "{lo..hi}" integer ranges, with the
// cartesian product over several groups, left to right.
std::vector<std::string> expand_braces(std::string_view text);

// "3", "1,2,5", "1..20" or a mix ("1..3,9").
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::int64_t parse_int(std::string_view text, std::string_view what);
// Full unsigned 64-bit range.
std::uint64_t parse_seed(std::string_view text);

}  // namespace anonet
