#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "anonet/circuits.h"
#include "anonet/engine.h"
#include "anonet/error.h"
#include "support.h"

namespace anonet {
namespace {

struct Settled {
  RunResult result;
  Configuration final_configuration;
  std::vector<Activation> activations;
  std::vector<int> input;
};

Settled settle(const ProtocolDef& p, const std::string& graph,
               const std::vector<std::int64_t>& counts, const Expectation& expected,
               std::uint64_t seed) {
  Rng placement(seed);
  auto input = testing::layout(counts, placement);
  Graph g = build_graph(graph, seed);
  RunOptions o;
  o.seed = seed;
  o.record_trace = true;
  auto out = run(p, g, input, expected, o);
  return {out.result, out.final_configuration, out.trace->activations, input};
}

std::int64_t ones(const RunResult& r) {
  return std::count(r.final_outputs.begin(), r.final_outputs.end(), 1);
}

TEST(MaxGate, Examples) {
  struct Case { std::int64_t a1, a2; } cases[] = {{3, 0}, {2, 2}, {5, 3}};
  for (auto c : cases) {
    const std::int64_t n = c.a1 + c.a2;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto s = settle(max_gate_protocol(), "complete:" + std::to_string(n), {c.a1, c.a2},
                      Expectation::ones(std::max(c.a1, c.a2)), seed);
      EXPECT_TRUE(s.result.stabilized);
      EXPECT_EQ(ones(s.result), std::max(c.a1, c.a2));
      EXPECT_EQ(static_cast<std::int64_t>(s.result.final_outputs.size()) - ones(s.result),
                std::min(c.a1, c.a2));
    }
  }
}

TEST(MinGate, Examples) {
  struct Case { std::int64_t a1, a2; } cases[] = {{0, 4}, {3, 3}, {1, 6}};
  for (auto c : cases) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto s = settle(min_gate_protocol(), "cycle:" + std::to_string(c.a1 + c.a2), {c.a1, c.a2},
                      Expectation::ones(std::min(c.a1, c.a2)), seed);
      EXPECT_TRUE(s.result.stabilized);
      EXPECT_EQ(ones(s.result), std::min(c.a1, c.a2));
    }
  }
}

TEST(Gates, TransitionRules) {
  auto mx = max_gate_protocol();
  auto mn = min_gate_protocol();
  auto s = [](int charge, bool out) { return GateState{static_cast<std::int8_t>(charge), out}.pack(); };
  EXPECT_EQ(mx.apply(s(1, true), s(-1, true)), (StatePair{s(0, true), s(0, false)}));
  EXPECT_EQ(mx.apply(s(-1, true), s(1, true)), (StatePair{s(0, true), s(0, false)}));
  EXPECT_EQ(mx.apply(s(1, true), s(0, false)), (StatePair{s(0, false), s(1, true)}));
  EXPECT_EQ(mx.apply(s(1, true), s(1, true)), (StatePair{s(1, true), s(1, true)}));
  EXPECT_EQ(mn.apply(s(1, false), s(-1, false)), (StatePair{s(0, false), s(0, true)}));
  EXPECT_EQ(mx.init(0), s(1, true));
  EXPECT_EQ(mx.init(1), s(-1, true));
  EXPECT_EQ(mn.init(0), s(1, false));
  EXPECT_EQ(mx.budget_bits, 3);
  EXPECT_EQ(mn.budget_bits, 3);
}

TEST(CompileCircuit, SpecExamples) {
  auto c = compile_circuit(ComparisonCircuit::parse("(max (max 0 1) (max 2 3))"));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = settle(c, "complete:14", {3, 5, 2, 4}, Expectation::ones(5), seed);
    EXPECT_TRUE(s.result.stabilized);
    EXPECT_EQ(ones(s.result), 5);
  }
  auto single = compile_circuit(ComparisonCircuit::parse("(max 0 1)"));
  auto s1 = settle(single, "cycle:5", {4, 1}, Expectation::ones(4), 3);
  EXPECT_TRUE(s1.result.stabilized);
  EXPECT_EQ(ones(s1.result), 4);

  auto mixed = compile_circuit(ComparisonCircuit::parse("(max (min 0 1) (max 2 3))"));
  auto s2 = settle(mixed, "complete:14", {3, 5, 2, 4}, Expectation::ones(4), 4);
  EXPECT_TRUE(s2.result.stabilized);
  EXPECT_EQ(ones(s2.result), 4);
}

TEST(CompileCircuit, RejectsUnsupportedShapes) {
  EXPECT_THROW(compile_circuit(ComparisonCircuit::parse("(min (max 0 1) 2)")), ConfigError);
  EXPECT_NO_THROW(compile_circuit(ComparisonCircuit::parse("(min (min 0 1) 2)")));
  std::string deep = "0";
  for (int i = 1; i <= 15; ++i) deep = "(max " + deep + " " + std::to_string(i) + ")";
  EXPECT_THROW(compile_circuit(ComparisonCircuit::parse(deep)), ConfigError);
  auto c = compile_circuit(ComparisonCircuit::parse("(max 0 1)"));
  EXPECT_THROW(c.init(2), ConfigError);
}

TEST(CircuitProtocol, EncodeDecodeRoundTrip) {
  auto p = make_plurality_protocol(8);
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    CircuitAgentState a;
    a.initial_color = std::uniform_int_distribution<int>(0, 7)(rng);
    a.final_color = std::uniform_int_distribution<int>(0, 7)(rng);
    a.depth = static_cast<int>(p->path(a.initial_color).size());
    for (int i = 0; i < a.depth; ++i) {
      a.levels[i].charge = static_cast<std::int8_t>(std::uniform_int_distribution<int>(-1, 1)(rng));
      a.levels[i].out = std::bernoulli_distribution(0.5)(rng);
      a.levels[i].mark = std::bernoulli_distribution(0.5)(rng);
    }
    auto packed = p->encode(a);
    EXPECT_LT(packed, AgentState{1} << p->budget_bits());
    EXPECT_EQ(p->decode(packed), a);
  }
}

// Independent recursive evaluation per gate, from the node structure.
std::int64_t expected_at(const ComparisonCircuit& c, int id, const std::vector<std::int64_t>& counts) {
  if (!c.is_gate(id)) return id < static_cast<int>(counts.size()) ? counts[id] : 0;
  auto l = expected_at(c, c.node(id).left, counts);
  auto r = expected_at(c, c.node(id).right, counts);
  return c.node(id).kind == GateKind::kMax ? std::max(l, r) : std::min(l, r);
}

// Property: for random MAX circuits of depth <= 3 with counts <= 5 and
// n <= 12, every gate's settled one-count equals the recursive max.
TEST(CompileCircuit, CompositionCorrectness) {
  Rng rng(17);
  int checked = 0;
  while (checked < 60) {
    int k = std::uniform_int_distribution<int>(2, 6)(rng);
    auto text = testing::random_max_circuit(rng, k, 3);
    std::vector<std::int64_t> counts(k);
    for (auto& x : counts) x = std::uniform_int_distribution<int>(0, 5)(rng);
    std::int64_t n = 0;
    for (auto x : counts) n += x;
    if (n < 3 || n > 12) continue;
    ++checked;

    auto circuit = ComparisonCircuit::parse(text);
    auto protocol = make_circuit_protocol(circuit);
    auto def = to_protocol_def(protocol, text);
    const char* family = checked % 3 == 0 ? "cycle" : (checked % 3 == 1 ? "complete" : "gnp");
    const auto want = testing::naive_circuit_value(text, counts);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto s = settle(def, testing::family_spec(family, static_cast<int>(n)), counts,
                      Expectation::ones(want), seed);
      ASSERT_TRUE(s.result.stabilized) << text;
      ASSERT_TRUE(s.result.quiescent) << text;
      for (std::size_t g = circuit.leaf_count(); g < circuit.nodes().size(); ++g) {
        EXPECT_EQ(ones_at_gate(*protocol, s.final_configuration.states, static_cast<int>(g)),
                  expected_at(circuit, static_cast<int>(g), counts))
            << text << " gate " << circuit.to_string(static_cast<int>(g));
      }
    }
  }
}

TEST(CollisionLedger, DepthOneHasNoCorrections) {
  auto protocol = make_circuit_protocol(ComparisonCircuit::parse("(max 0 1)"));
  auto def = to_protocol_def(protocol, "g");
  auto s = settle(def, "complete:7", {3, 4}, Expectation::ones(4), 2);
  auto ledger = collision_count_check(*protocol, s.input, s.activations, protocol->circuit().root());
  EXPECT_TRUE(ledger.ok) << ledger.to_string();
  EXPECT_EQ(ledger.c1 + ledger.c2 + ledger.d1 + ledger.d2, 0);
  EXPECT_EQ(ledger.collisions, 3);
  EXPECT_EQ(ledger.A, 3);
  EXPECT_EQ(ledger.B, 4);
}

TEST(CollisionLedger, LeftSideCanceledBelow) {
  // The left subtree holds no agents, so a = 0 and collisions = c2 + d2.
  auto protocol = make_circuit_protocol(ComparisonCircuit::parse("(max (max 0 1) (max 2 3))"));
  auto def = to_protocol_def(protocol, "g");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = settle(def, "cycle:7", {0, 0, 4, 3}, Expectation::ones(4), seed);
    auto ledger =
        collision_count_check(*protocol, s.input, s.activations, protocol->circuit().root());
    EXPECT_TRUE(ledger.ok) << ledger.to_string();
    EXPECT_EQ(ledger.a, 0);
    EXPECT_EQ(ledger.collisions, ledger.c2 + ledger.d2);
  }
}

TEST(CollisionLedger, RandomDepthTwoCircuits) {
  Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    int k = std::uniform_int_distribution<int>(3, 4)(rng);
    auto text = testing::random_max_circuit(rng, k, 2);
    std::vector<std::int64_t> counts(k);
    for (auto& x : counts) x = std::uniform_int_distribution<int>(0, 6)(rng);
    std::int64_t n = 0;
    for (auto x : counts) n += x;
    if (n < 3) continue;
    auto protocol = make_circuit_protocol(ComparisonCircuit::parse(text));
    auto def = to_protocol_def(protocol, text);
    auto s = settle(def, testing::family_spec("gnp", static_cast<int>(n)), counts,
                    Expectation::ones(testing::naive_circuit_value(text, counts)), trial);
    ASSERT_TRUE(s.result.stabilized);
    const auto& c = protocol->circuit();
    for (std::size_t g = c.leaf_count(); g < c.nodes().size(); ++g) {
      auto ledger = collision_count_check(*protocol, s.input, s.activations, static_cast<int>(g));
      EXPECT_TRUE(ledger.ok) << text << " " << ledger.to_string();
    }
  }
}

TEST(CollisionLedger, RejectsMinGates) {
  auto protocol = make_circuit_protocol(ComparisonCircuit::parse("(min 0 1)"));
  std::vector<int> input{0, 1};
  EXPECT_THROW(collision_count_check(*protocol, input, {}, protocol->circuit().root()),
               ConfigError);
}

TEST(Plurality, Examples) {
  auto p = plurality_protocol(4);
  EXPECT_EQ(p.budget_bits, 12);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = settle(p, "complete:12", {5, 3, 2, 2}, Expectation::consensus(0), seed);
    EXPECT_TRUE(s.result.stabilized);
  }
  for (const char* family : {"complete", "cycle"}) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto s = settle(p, testing::family_spec(family, 7), {1, 1, 1, 4}, Expectation::consensus(3),
                      seed);
      EXPECT_TRUE(s.result.stabilized) << family << " seed " << seed;
      for (Output o : s.result.final_outputs) EXPECT_EQ(o, 3);
    }
  }
}

TEST(Plurality, NonPowerOfTwo) {
  auto p = plurality_protocol(3);
  EXPECT_EQ(p.color_count, 3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = settle(p, "gnp:9:0.4", {2, 4, 3}, Expectation::consensus(1), seed);
    EXPECT_TRUE(s.result.stabilized);
  }
  EXPECT_THROW(plurality_protocol(4).init(4), ConfigError);
}

// Property: scaling every count by m keeps the stabilized color.
TEST(Plurality, ScalingInvariance) {
  Rng rng(31);
  auto p = plurality_protocol(4);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<std::int64_t> counts(4);
    for (auto& x : counts) x = std::uniform_int_distribution<int>(0, 4)(rng);
    auto best = std::max_element(counts.begin(), counts.end());
    if (std::count(counts.begin(), counts.end(), *best) != 1) continue;
    const Output want = best - counts.begin();
    for (int m = 1; m <= 3; ++m) {
      std::vector<std::int64_t> scaled;
      std::int64_t n = 0;
      for (auto x : counts) {
        scaled.push_back(x * m);
        n += x * m;
      }
      if (n < 2) continue;
      auto s = settle(p, "complete:" + std::to_string(n), scaled, Expectation::consensus(want),
                      static_cast<std::uint64_t>(trial * 10 + m));
      EXPECT_TRUE(s.result.stabilized) << "m=" << m;
    }
  }
}

}  // namespace
}  // namespace anonet
