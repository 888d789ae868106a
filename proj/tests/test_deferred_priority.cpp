#include <gtest/gtest.h>

#include "ofd/deferred_priority.hpp"
#include "ofd/generators.hpp"
#include "ofd/runner.hpp"

using namespace ofd;

namespace {

InstanceHeader header(std::size_t n, double alpha = 5, double beta = 1) {
  InstanceHeader h;
  h.n = n;
  h.agents.assign(n, AgentProfile::make(alpha, beta));
  return h;
}

Instance instance_of(const InstanceHeader& h, const std::vector<HighLowMask>& masks) {
  Instance inst{h, {}};
  for (std::size_t k = 0; k < masks.size(); ++k) inst.goods.push_back(GoodEvent::two_value(k + 1, masks[k]));
  return inst;
}

}  // namespace

TEST(DpStep, TwoHighGoodsForTwoAgents) {
  const InstanceHeader h = header(2);
  PriorityState ps = PriorityState::initial(2);
  const DpDecision d1 = dp_step(ps, h, GoodEvent::two_value(1, {1, 1}));
  EXPECT_EQ(d1.agent, 0u);
  EXPECT_TRUE(d1.as_high);
  EXPECT_EQ(ps.H, (std::vector<std::int64_t>{5, 1}));
  EXPECT_EQ(ps.chi, (std::vector<std::uint8_t>{1, 0}));
  const DpDecision d2 = dp_step(ps, h, GoodEvent::two_value(2, {1, 1}));
  EXPECT_EQ(d2.agent, 1u);
  EXPECT_EQ(ps.H, (std::vector<std::int64_t>{4, 4}));
  EXPECT_TRUE(d2.closed_phase);
  EXPECT_EQ(ps.phase, 1u);
  EXPECT_EQ(ps.chi, (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(ps.L, (std::vector<std::int64_t>{3, 3}));
}

TEST(DpStep, FirstLowGood) {
  const InstanceHeader h = header(2);
  PriorityState ps = PriorityState::initial(2);
  const DpDecision d = dp_step(ps, h, GoodEvent::two_value(1, {0, 0}));
  EXPECT_EQ(d.agent, 0u);
  EXPECT_FALSE(d.as_high);
  EXPECT_EQ(ps.L, (std::vector<std::int64_t>{5, 2}));
  EXPECT_EQ(ps.chi[0], 1);
  EXPECT_EQ(ps.phase, 0u);
}

TEST(DpStep, InactiveHighAgentIsSkipped) {
  // agent 1 takes a high good; the next good is high only for agent 1, so
  // nobody eligible sees it high and it goes to agent 2 as a low good
  const InstanceHeader h = header(3);
  PriorityState ps = PriorityState::initial(3);
  dp_step(ps, h, GoodEvent::two_value(1, {1, 0, 0}));
  const DpDecision d = dp_step(ps, h, GoodEvent::two_value(2, {1, 0, 0}));
  EXPECT_FALSE(d.as_high);
  EXPECT_EQ(d.agent, 1u);
}

TEST(DpStep, TypeTwoAgentsAlwaysSeeHigh) {
  InstanceHeader h = header(2);
  h.agents[1] = AgentProfile::make(3, 3);
  PriorityState ps = PriorityState::initial(2);
  const DpDecision d = dp_step(ps, h, GoodEvent::two_value(1, {0, 0}));
  EXPECT_EQ(d.agent, 1u);
  EXPECT_TRUE(d.as_high);
}

TEST(LevelSets, SpecExamples) {
  EXPECT_TRUE(check_level_sets(PriorityState::initial(4)));
  PriorityState ps = PriorityState::initial(2);
  ps.H = {1, 1};
  EXPECT_FALSE(check_level_sets(ps));
  ps.H = {1, 2};
  EXPECT_TRUE(check_level_sets(ps));
}

TEST(StructuralGuarantees, UniversalLowsGiveOneGoodEach) {
  for (std::size_t n = 1; n <= 7; ++n) {
    const Instance inst = instance_of(header(n), std::vector<HighLowMask>(n, HighLowMask(n, 0)));
    DeferredPriority dp;
    const RunResult r = run_stream(dp, inst);
    for (AgentId i = 0; i < n; ++i) EXPECT_EQ(r.state.goods_received(i), 1u);
    EXPECT_TRUE(check_structural_guarantees(inst, r.allocation).empty());
  }
}

TEST(StructuralGuarantees, HandTraceSatisfiesPartTwo) {
  const Instance inst = instance_of(header(2), {{1, 1}, {1, 1}});
  DeferredPriority dp;
  const RunResult r = run_stream(dp, inst);
  EXPECT_EQ(r.state.high_received(1), 1u);
  EXPECT_TRUE(check_structural_guarantees(inst, r.allocation).empty());
}

TEST(StructuralGuarantees, DetectsAStarvingAllocation) {
  const Instance inst = instance_of(header(2), std::vector<HighLowMask>(6, HighLowMask{1, 1}));
  EXPECT_FALSE(check_structural_guarantees(inst, std::vector<AgentId>(6, 0)).empty());
}

TEST(StructuralGuarantees, EveryAgentHoldsTwoGoodsAfterThreeNMinusOne) {
  for (std::size_t n = 2; n <= 6; ++n) {
    GeneratorSpec spec;
    spec.n = n;
    spec.m = 3 * n - 1;
    spec.seed = n;
    const Instance inst = generate(spec);
    DeferredPriority dp;
    const RunResult r = run_stream(dp, inst);
    for (AgentId i = 0; i < n; ++i) EXPECT_GE(r.state.goods_received(i), 2u);
  }
}

TEST(ShareGuarantees, TypeTwoAgentShare) {
  InstanceHeader h = header(3);
  h.agents[2] = AgentProfile::make(1, 1);
  const Instance inst = instance_of(h, std::vector<HighLowMask>(8, HighLowMask{1, 0, 0}));
  DeferredPriority dp;
  const RunResult r = run_stream(dp, inst);
  EXPECT_TRUE(check_share_guarantees(inst, r.allocation).empty());
}

TEST(ShareGuarantees, DetectShortfall) {
  const Instance inst = instance_of(header(2, 1, 1), std::vector<HighLowMask>(6, HighLowMask{0, 0}));
  EXPECT_FALSE(check_share_guarantees(inst, std::vector<AgentId>(6, 0)).empty());
}

// Every audited property on a seeded corpus. The step-level audit includes
// phase lengths, inactivity after a high good and low-good rotation.
class DpCorpus : public ::testing::TestWithParam<std::size_t> {};

TEST_P(DpCorpus, AuditHoldsOnEveryStep) {
  const std::size_t n = GetParam();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GeneratorSpec spec;
    spec.n = n;
    spec.m = 120;
    spec.seed = 7000 + seed;
    spec.mix = seed % 2 ? AgentMix::Mixed : AgentMix::Type1;
    const Instance inst = generate(spec);
    DeferredPriority dp;
    DeferredPriorityAudit audit(inst);
    run_stream(dp, inst, [&](const StepView& s) { audit.observe(s, dp); });
    ASSERT_TRUE(audit.ok()) << "seed " << spec.seed << ", t=" << audit.violations()[0].t << ": "
                            << audit.violations()[0].what;
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, DpCorpus, ::testing::Values(1, 2, 3, 4, 5, 6, 8));

TEST(DeferredPriority, TraceColumns) {
  const Instance inst = instance_of(header(2), {{1, 1}, {0, 0}});
  DeferredPriority dp;
  const RunResult r = run_stream(dp, inst);
  EXPECT_EQ(r.trace_header, ",as_high,phase,H,L,chi");
  ASSERT_EQ(r.trace_fields.size(), 2u);
  EXPECT_EQ(r.trace_fields[0].rfind(",1,0,", 0), 0u);
}
