#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "anonet/error.h"
#include "anonet/oracle.h"
#include "anonet/protocols.h"
#include "anonet/scaling.h"
#include "support.h"

namespace anonet {
namespace {

Output consensus_value(const FunctionSpec& f, std::vector<std::int64_t> counts) {
  auto e = oracle_value(f, counts);
  EXPECT_EQ(e.kind, Expectation::Kind::kConsensus);
  return e.value;
}

TEST(OracleValue, Examples) {
  EXPECT_EQ(consensus_value(fn::Bit{2}, {13, 3}), 1);
  EXPECT_EQ(consensus_value(fn::Threshold{1, 3}, {3, 5}), 1);
  EXPECT_EQ(consensus_value(fn::Plurality{4}, {5, 3, 2, 2}), 0);
  EXPECT_EQ(consensus_value(fn::Or{}, {4, 0}), 0);
  EXPECT_EQ(consensus_value(fn::LowBits{2}, {5, 3}), 1);
  EXPECT_EQ(consensus_value(fn::Estimate{}, {0, 9}), kEmptyEstimate);
  EXPECT_EQ(consensus_value(fn::Estimate{}, {12, 0}), 3);
  EXPECT_EQ(oracle_value(fn::MaxGate{}, std::vector<std::int64_t>{5, 3}), Expectation::ones(5));
  EXPECT_EQ(oracle_value(fn::MinGate{}, std::vector<std::int64_t>{5, 3}), Expectation::ones(3));
  auto c = std::make_shared<ComparisonCircuit>(ComparisonCircuit::parse("(max (min 0 1) (max 2 3))"));
  EXPECT_EQ(oracle_value(fn::Circuit{c}, std::vector<std::int64_t>{3, 5, 2, 4}), Expectation::ones(4));
}

TEST(OracleValue, Errors) {
  EXPECT_THROW(oracle_value(fn::Plurality{4}, std::vector<std::int64_t>{2, 5, 5, 1}), OracleError);
  EXPECT_THROW(oracle_value(fn::Or{}, std::vector<std::int64_t>{-1, 2}), OracleError);
  EXPECT_THROW(color_counts(std::vector<int>{0, 3}, 2), ConfigError);
  // A tie below the maximum is fine.
  EXPECT_EQ(consensus_value(fn::Plurality{4}, {2, 2, 5, 1}), 2);
}

// Property: direct arithmetic agrees with loop-based reference values.
TEST(OracleValue, MatchesReferenceComputations) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 64)(rng);
    const int r = std::uniform_int_distribution<int>(0, n)(rng);
    std::vector<std::int64_t> counts{r, n - r};
    const int c = std::uniform_int_distribution<int>(1, 6)(rng);
    const int a = std::uniform_int_distribution<int>(1, 1 << c)(rng);
    const int b = std::uniform_int_distribution<int>(1, 1 << c)(rng);
    const int j = std::uniform_int_distribution<int>(0, 7)(rng);

    std::int64_t low = 0;
    for (int i = 0; i < c; ++i) low += static_cast<std::int64_t>(testing::naive_bit(r, i)) << i;
    EXPECT_EQ(consensus_value(fn::LowBits{c}, counts), low);
    EXPECT_EQ(consensus_value(fn::Bit{j}, counts), testing::naive_bit(r, j));
    EXPECT_EQ(consensus_value(fn::Threshold{a, b}, counts), testing::naive_threshold(r, n, a, b));
    EXPECT_EQ(consensus_value(fn::Or{}, counts), n - r > 0 ? 1 : 0);
    EXPECT_EQ(consensus_value(fn::Estimate{}, counts),
              r == 0 ? kEmptyEstimate : testing::naive_floor_log2(r));
  }
}

// Property: on complete MAX trees the circuit value is the plurality
// color's count.
TEST(OracleValue, CircuitAgreesWithPluralityArgmax) {
  Rng rng(8);
  for (int k : {2, 3, 4, 5, 8}) {
    auto tree = std::make_shared<ComparisonCircuit>(ComparisonCircuit::complete_max_tree(k));
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::int64_t> counts(k);
      for (auto& x : counts) x = std::uniform_int_distribution<int>(0, 20)(rng);
      auto top = oracle_value(fn::Circuit{tree}, counts).value;
      try {
        auto color = consensus_value(fn::Plurality{k}, counts);
        EXPECT_EQ(top, counts[color]);
      } catch (const OracleError&) {
        EXPECT_GE(std::count(counts.begin(), counts.end(), top), 2);
      }
    }
  }
}

TEST(PowerLawFit, ExactData) {
  std::vector<double> x{8, 16, 32, 64}, y;
  for (double v : x) y.push_back(3.0 * v * v);
  auto fit = fit_power_law(x, y);
  EXPECT_NEAR(fit.exponent, 2.0, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 3.0, 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(fit.ci_low, 2.0, 1e-6);
  EXPECT_NEAR(fit.ci_high, 2.0, 1e-6);
  EXPECT_EQ(fit.points, 4);
}

TEST(PowerLawFit, NoisyDataInterval) {
  std::vector<double> x{8, 16, 32, 64}, y{520, 4000, 33000, 260000};
  auto fit = fit_power_law(x, y);
  EXPECT_GT(fit.exponent, 2.8);
  EXPECT_LT(fit.exponent, 3.1);
  EXPECT_LT(fit.ci_low, fit.exponent);
  EXPECT_GT(fit.ci_high, fit.exponent);
  EXPECT_GT(fit.stderr_exponent, 0);
}

TEST(PowerLawFit, Errors) {
  std::vector<double> one{1}, two{1, 2}, same{4, 4}, neg{-1, 2};
  EXPECT_THROW(fit_power_law(one, one), ConfigError);
  EXPECT_THROW(fit_power_law(two, neg), ConfigError);
  EXPECT_THROW(fit_power_law(same, two), ConfigError);
}

TEST(Scaling, GraphSpecs) {
  EXPECT_EQ(graph_spec_for("cycle", 8), "cycle:8");
  EXPECT_EQ(graph_spec_for("gnp:{n}:0.4", 12), "gnp:12:0.4");
}

std::vector<int> half_red(NodeId n, std::uint64_t seed) {
  Rng rng(seed);
  return testing::layout({n / 2 + 1, n - n / 2 - 1}, rng);
}

TEST(Scaling, OrOnCompleteIsNearLinear) {
  std::vector<NodeId> sizes{8, 16, 32};
  auto one_blue = [](NodeId n, std::uint64_t) {
    std::vector<int> in(n, 0);
    in[0] = 1;
    return in;
  };
  auto report = scaling_report(or_protocol(), "complete", sizes, one_blue, {});
  ASSERT_EQ(report.points.size(), 3u);
  EXPECT_TRUE(report.flagged.empty());
  EXPECT_LE(report.fit.exponent, 2.0);
  EXPECT_GT(report.fit.exponent, 0.5);
}

TEST(Scaling, ParityCompleteBelowCycle) {
  std::vector<NodeId> sizes{8, 16, 32};
  auto cycle = scaling_report(lsb_counter_protocol(1), "cycle", sizes, half_red, {});
  auto complete = scaling_report(lsb_counter_protocol(1), "complete", sizes, half_red, {});
  EXPECT_LT(complete.fit.exponent, cycle.fit.exponent);
  EXPECT_LE(cycle.fit.exponent, 3.4);
}

TEST(Scaling, TimeoutsAreExcludedAndFlagged) {
  std::vector<NodeId> sizes{8, 16};
  ScalingOptions o;
  o.seeds = 3;
  o.limits.max_steps = 5;
  auto report = scaling_report(lsb_counter_protocol(1), "cycle", sizes, half_red, o);
  EXPECT_EQ(report.flagged.size(), 6u);
  for (auto& p : report.points) EXPECT_EQ(p.excluded, 3);
}

}  // namespace
}  // namespace anonet
