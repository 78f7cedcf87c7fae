#pragma once

// Test helpers: independent reference computations and small random
// generators for property tests. Nothing here calls into the library's
// oracle module.

#include <cstdint>
#include <string>
#include <vector>

#include "anonet/graph.h"

namespace anonet::testing {

// Reference values computed by plain loops over the input vector.
std::int64_t count_color(const std::vector<int>& input, int color);
int naive_bit(std::int64_t r, int j);             // via a binary string
int naive_floor_log2(std::int64_t r);             // repeated halving
bool naive_threshold(std::int64_t r, std::int64_t n, std::int64_t a, std::int64_t b);

// Evaluates a circuit written in the s-expression DSL directly from the
// text, without the library parser.
std::int64_t naive_circuit_value(const std::string& text, const std::vector<std::int64_t>& counts);

// Random MAX circuit text over leaves 0..k-1 with depth <= max_depth.
std::string random_max_circuit(Rng& rng, int k, int max_depth);

// BFS connectivity written against an adjacency matrix.
bool naive_connected(const Graph& g);

// Colors laid out as `counts` blocks, then shuffled by `rng`.
std::vector<int> layout(const std::vector<std::int64_t>& counts, Rng& rng);

// Connected graph spec of a random family ("complete", "cycle", "gnp") on n nodes.
std::string family_spec(const std::string& family, int n);

}  // namespace anonet::testing
