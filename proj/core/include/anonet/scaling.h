#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anonet/engine.h"
#include "anonet/protocol.h"

namespace anonet {

// Least-squares fit of log(y) = intercept + exponent * log(x).
struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double stderr_exponent = 0.0;
  double ci_low = 0.0;  // two-sided interval at `confidence`
  double ci_high = 0.0;
  double confidence = 0.95;
  double r_squared = 0.0;
  int points = 0;
};

// Needs at least two points with positive coordinates; the interval needs three.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          double confidence = 0.95);

struct ScalingPoint {
  NodeId n = 0;
  int runs = 0;      // runs included in the mean
  int excluded = 0;  // runs that hit max_steps
  double mean = 0.0;
  double stderr_mean = 0.0;
};

struct ScalingReport {
  std::string protocol;
  std::string family;
  std::vector<ScalingPoint> points;
  PowerLawFit fit;
  std::vector<std::string> flagged;  // "n=.. seed=..": excluded runs
};

// "cycle" -> "cycle:16"; a "{n}" placeholder is substituted instead, so
// "gnp:{n}:0.4" -> "gnp:16:0.4".
std::string graph_spec_for(const std::string& family, NodeId n);

struct ScalingOptions {
  int seeds = 20;
  std::uint64_t base_seed = 1;
  RunLimits limits;
  RewirePolicy rewire;
};

// Mean first_correct_step per size, fitted against n. `input_for` chooses
// the input for a given n and seed; the expectation comes from the oracle.
ScalingReport scaling_report(const ProtocolDef& protocol, const std::string& family,
                             std::span<const NodeId> sizes,
                             const std::function<std::vector<int>(NodeId, std::uint64_t)>& input_for,
                             const ScalingOptions& options = {});

}  // namespace anonet
