#include "anonet/oracle.h"

#include <algorithm>
#include <bit>

#include "anonet/error.h"

namespace anonet {

std::vector<std::int64_t> color_counts(std::span<const int> input, int color_count) {
  std::vector<std::int64_t> counts(color_count, 0);
  for (int c : input) {
    if (c < 0 || c >= color_count) {
      throw ConfigError("color " + std::to_string(c) + " outside [0, " +
                        std::to_string(color_count) + ")");
    }
    ++counts[c];
  }
  return counts;
}

namespace {

std::int64_t at(std::span<const std::int64_t> counts, std::size_t i) {
  return i < counts.size() ? counts[i] : 0;
}

struct Evaluate {
  std::span<const std::int64_t> counts;

  std::int64_t r() const { return at(counts, 0); }
  std::int64_t n() const {
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    return total;
  }

  Expectation operator()(const fn::Or&) const { return Expectation::consensus(at(counts, 1) > 0); }
  Expectation operator()(const fn::LowBits& f) const {
    return Expectation::consensus(r() & ((std::int64_t{1} << f.c) - 1));
  }
  Expectation operator()(const fn::Threshold& f) const {
    return Expectation::consensus(f.b * r() > f.a * (n() - r()) ? 1 : 0);
  }
  Expectation operator()(const fn::Bit& f) const { return Expectation::consensus((r() >> f.j) & 1); }
  Expectation operator()(const fn::Estimate&) const {
    if (r() == 0) return Expectation::consensus(kEmptyEstimate);
    return Expectation::consensus(std::bit_width(static_cast<std::uint64_t>(r())) - 1);
  }
  Expectation operator()(const fn::MaxGate&) const {
    return Expectation::ones(std::max(at(counts, 0), at(counts, 1)));
  }
  Expectation operator()(const fn::MinGate&) const {
    return Expectation::ones(std::min(at(counts, 0), at(counts, 1)));
  }
  Expectation operator()(const fn::Circuit& f) const {
    if (!f.circuit) throw OracleError("circuit function without a circuit");
    return Expectation::ones(f.circuit->evaluate(counts));
  }
  Expectation operator()(const fn::Plurality& f) const {
    if (f.k < 1 || counts.empty()) throw OracleError("plurality over no colors");
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t c = 1; c < counts.size() && c < static_cast<std::size_t>(f.k); ++c) {
      if (counts[c] > counts[best]) {
        best = c;
        tie = false;
      } else if (counts[c] == counts[best]) {
        tie = true;
      }
    }
    if (tie) throw OracleError("plurality tie at count " + std::to_string(counts[best]));
    return Expectation::consensus(static_cast<Output>(best));
  }
};

}  // namespace

Expectation oracle_value(const FunctionSpec& function, std::span<const std::int64_t> counts) {
  for (auto c : counts) {
    if (c < 0) throw OracleError("negative color count");
  }
  return std::visit(Evaluate{counts}, function);
}

Expectation oracle_for_input(const ProtocolDef& protocol, std::span<const int> input) {
  auto counts = color_counts(input, protocol.color_count);
  return oracle_value(protocol.function, counts);
}

std::string to_string(const Expectation& e) {
  return (e.kind == Expectation::Kind::kConsensus ? "all=" : "ones=") + std::to_string(e.value);
}

}  // namespace anonet
