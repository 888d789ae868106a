#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "ofd/assignment.hpp"
#include "ofd/foresight_matching.hpp"
#include "ofd/generators.hpp"
#include "ofd/runner.hpp"

using namespace ofd;

namespace {

Instance instance_of(std::size_t n, const std::vector<HighLowMask>& masks, std::size_t foresight) {
  Instance inst;
  inst.header.n = n;
  inst.header.agents.assign(n, AgentProfile::make(5, 1));
  inst.header.foresight = foresight;
  for (std::size_t k = 0; k < masks.size(); ++k) inst.goods.push_back(GoodEvent::two_value(k + 1, masks[k]));
  return inst;
}

PairPattern from_key(std::size_t key) { return {(key & 8) != 0, (key & 4) != 0, (key & 2) != 0, (key & 1) != 0}; }

}  // namespace

TEST(PatternTable, ExactlyTwoContestedPatterns) {
  int contested = 0;
  for (std::size_t key = 0; key < 16; ++key) {
    const PairRule r = pattern_table()[key];
    if (r == PairRule::ContestedI || r == PairRule::ContestedII) ++contested;
  }
  EXPECT_EQ(contested, 2);
  EXPECT_EQ(lookup({false, true, false, true}), PairRule::ContestedI);
  EXPECT_EQ(lookup({true, false, true, false}), PairRule::ContestedII);
}

TEST(PatternTable, TieAssignments) {
  EXPECT_EQ(lookup({false, false, false, false}), PairRule::FirstToAgent1);
  EXPECT_EQ(lookup({true, true, false, false}), PairRule::FirstToAgent1);
  EXPECT_EQ(lookup({false, false, true, true}), PairRule::SecondToAgent1);
  EXPECT_EQ(lookup({true, true, true, true}), PairRule::FirstToAgent1);
}

TEST(PatternTable, FixedPatternsAreWeaklyPreferred) {
  for (std::size_t key = 0; key < 16; ++key) {
    const PairPattern p = from_key(key);
    const PairRule r = lookup(p);
    if (r == PairRule::FirstToAgent1) {
      EXPECT_GE(p.a1_first, p.a1_second) << p.label();
      EXPECT_GE(p.a2_second, p.a2_first) << p.label();
    } else if (r == PairRule::SecondToAgent1) {
      EXPECT_GE(p.a1_second, p.a1_first) << p.label();
      EXPECT_GE(p.a2_first, p.a2_second) << p.label();
    }
  }
}

TEST(PatternTable, JsonFixtureMatchesTable) {
  const auto doc = nlohmann::json::parse(pattern_table_json());
  ASSERT_EQ(doc["patterns"].size(), 16u);
  for (std::size_t key = 0; key < 16; ++key) {
    EXPECT_EQ(doc["patterns"][key]["pattern"], from_key(key).label());
    EXPECT_EQ(doc["patterns"][key]["rule"], to_string(pattern_table()[key]));
  }
}

TEST(NaiveMatching, ContestedIFromFreshCounter) {
  const Instance inst = instance_of(2, {{0, 0}, {1, 1}}, 1);
  NaiveMatching alg;
  const RunResult r = run_stream(alg, inst);
  EXPECT_EQ(alg.ctr(), 1);
  EXPECT_EQ(r.allocation, (std::vector<AgentId>{1, 0}));  // agent 2 gets g, agent 1 the high g'
}

TEST(NaiveMatching, CounterAlternatesContestedWinners) {
  const Instance inst = instance_of(2, {{1, 1}, {0, 0}, {1, 1}, {0, 0}}, 1);
  NaiveMatching alg;
  const RunResult r = run_stream(alg, inst);
  EXPECT_EQ(r.allocation, (std::vector<AgentId>{0, 1, 1, 0}));
  EXPECT_EQ(alg.ctr(), 0);
}

TEST(NaiveMatching, OddLastGoodFollowsCounter) {
  const Instance inst = instance_of(2, {{0, 0}, {1, 1}, {1, 0}}, 1);
  NaiveMatching alg;
  const RunResult r = run_stream(alg, inst);
  EXPECT_EQ(r.allocation.back(), 1u);  // ctr = 1 after the contested pair
}

TEST(NaiveMatching, RequiresTwoAgents) {
  NaiveMatching alg;
  InstanceHeader h;
  h.n = 3;
  EXPECT_THROW(alg.start(h), std::invalid_argument);
}

TEST(NaiveMatching, AuditHoldsOnSeededStreams) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GeneratorSpec spec;
    spec.n = 2;
    spec.m = 61;  // odd: exercises the unpaired last good
    spec.seed = 900 + seed;
    spec.foresight = 1;
    const Instance inst = generate(spec);
    NaiveMatching alg;
    NaiveMatchingAudit audit(inst);
    run_stream(alg, inst, [&](const StepView& s) { audit.observe(s, alg); });
    ASSERT_TRUE(audit.ok()) << "seed " << spec.seed << ": " << audit.violations()[0].what;
  }
}

TEST(AuxWeights, RankOneGetsTheLargerBase) {
  const InstanceHeader h = instance_of(2, {}, 1).header;
  const std::vector<GoodEvent> goods = {GoodEvent::two_value(1, {1, 0}), GoodEvent::two_value(2, {0, 1})};
  const AuxWeights w = aux_weights(h, topo_sort(EnvyGraph{2, {}}), goods);
  EXPECT_EQ(w.w[0][0], 10);
  EXPECT_EQ(w.w[0][1], 5);
  EXPECT_EQ(w.w[1][0], 4);
  EXPECT_EQ(w.w[1][1], 8);
}

TEST(PriorityMatching, FirstRoundPlan) {
  const Instance inst = instance_of(2, {{1, 0}, {0, 1}}, 1);
  PriorityMatching alg;
  const RunResult r = run_stream(alg, inst);
  EXPECT_EQ(r.allocation, (std::vector<AgentId>{0, 1}));
  ASSERT_EQ(alg.plans().size(), 1u);
  EXPECT_EQ(alg.plans()[0].order, (std::vector<AgentId>{0, 1}));
}

TEST(PriorityMatching, LastShortRoundLeavesAgentsOut) {
  const Instance inst = instance_of(3, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {0, 1, 0}}, 2);
  PriorityMatching alg;
  const RunResult r = run_stream(alg, inst);
  ASSERT_EQ(alg.plans().size(), 2u);
  std::size_t unmatched = 0;
  for (auto g : alg.plans()[1].good_of) unmatched += g == 0 ? 1 : 0;
  EXPECT_EQ(unmatched, 2u);
  EXPECT_EQ(r.allocation[3], 1u);
}

TEST(PriorityMatching, PlansOnlyAtRoundBoundaries) {
  GeneratorSpec spec;
  spec.n = 4;
  spec.m = 22;
  spec.seed = 3;
  spec.foresight = 3;
  const Instance inst = generate(spec);
  PriorityMatching alg;
  run_stream(alg, inst);
  ASSERT_EQ(alg.plans().size(), 6u);
  for (std::size_t k = 0; k < alg.plans().size(); ++k) EXPECT_EQ(alg.plans()[k].first_good, 4 * k + 1);
}

TEST(PriorityMatching, IncrementalEnvyGraphMatchesBundles) {
  GeneratorSpec spec;
  spec.n = 5;
  spec.m = 50;
  spec.seed = 77;
  spec.foresight = 4;
  const Instance inst = generate(spec);
  PriorityMatching alg;
  const RunResult r = run_stream(alg, inst);
  for (const auto& plan : alg.plans()) {
    const AllocationState before = replay(inst, std::span(r.allocation).first(plan.first_good - 1));
    const auto goods = std::span(inst.goods).subspan(plan.first_good - 1, std::min<std::size_t>(5, inst.m() - plan.first_good + 1));
    const RoundPlan direct = priority_round_plan(before, inst, goods, plan.round);
    EXPECT_EQ(direct.order, plan.order);
    EXPECT_EQ(direct.good_of, plan.good_of);
  }
}

class PmCorpus : public ::testing::TestWithParam<std::size_t> {};

TEST_P(PmCorpus, GuaranteesHoldOnSeededStreams) {
  const std::size_t n = GetParam();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GeneratorSpec spec;
    spec.n = n;
    spec.m = 20 * n + seed % n;  // includes a partial last round
    spec.seed = 31000 + seed;
    spec.foresight = n - 1;
    spec.mix = seed % 3 == 0 ? AgentMix::Type1 : AgentMix::Mixed;
    const auto v = check_priority_matching_guarantees(generate(spec));
    ASSERT_TRUE(v.empty()) << "seed " << spec.seed << ", t=" << v[0].t << ": " << v[0].what;
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, PmCorpus, ::testing::Values(2, 3, 4, 5, 6, 7));

TEST(Assignment, HungarianMatchesExhaustive) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t agents = 1 + rng() % 7;
    const std::size_t goods = 1 + rng() % agents;
    WeightMatrix<std::int64_t> w(agents, std::vector<std::int64_t>(goods));
    for (auto& row : w)
      for (auto& x : row) x = 1 + static_cast<std::int64_t>(rng() % 4);  // many ties
    const auto a = max_weight_assignment_exhaustive(w);
    const auto b = max_weight_assignment_hungarian(w);
    EXPECT_EQ(a.total, b.total) << "trial " << trial;
    EXPECT_EQ(a.good_of, b.good_of) << "trial " << trial;
  }
}

TEST(Assignment, BigIntWeightsForManyAgents) {
  // 14 agents: weights overflow int64 when summed, so the BigInt path runs
  GeneratorSpec spec;
  spec.n = 14;
  spec.m = 28;
  spec.seed = 1;
  spec.foresight = 13;
  const Instance inst = generate(spec);
  EXPECT_TRUE(check_priority_matching_guarantees(inst).empty());
}

TEST(Asymptotics, LambdaOneFloorsOnBalancedStreams) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec spec;
    spec.n = 2;
    spec.m = 400;
    spec.seed = seed;
    spec.foresight = 1;
    const auto v = check_asymptotics(generate(spec), "naive-matching", 1.0);
    ASSERT_TRUE(v.has_value());
    EXPECT_TRUE(v->empty());
  }
}

TEST(Asymptotics, IdenticalGoodsApproachOne) {
  const Instance inst = instance_of(3, std::vector<HighLowMask>(300, HighLowMask(3, 1)), 2);
  PriorityMatching alg;
  const RunResult r = run_stream(alg, inst);
  const FairnessReport rep = compute_report(r.state, inst);
  for (const auto& a : rep.agents) EXPECT_TRUE(a.ef.is_one());
}

TEST(Asymptotics, PremiseNotReachedOnShortStream) {
  const Instance inst = instance_of(2, {{1, 1}, {0, 0}}, 1);
  EXPECT_FALSE(check_asymptotics(inst, "naive-matching", 4.0).has_value());
}
