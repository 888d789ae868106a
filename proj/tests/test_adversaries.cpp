#include <gtest/gtest.h>

#include <json.hpp>

#include "ofd/adversaries.hpp"
#include "ofd/baselines.hpp"
#include "ofd/deferred_priority.hpp"
#include "ofd/runner.hpp"

using namespace ofd;

namespace {

// Plays a fixed sequence of recipients.
class Scripted final : public OnlineAlgorithm {
 public:
  explicit Scripted(std::vector<AgentId> script) : script_(std::move(script)) {}
  std::string name() const override { return "scripted"; }
  void start(const InstanceHeader&) override {}
  AgentId choose(const AllocationState& state, const GoodEvent&, std::span<const GoodEvent>) override {
    return script_.at(state.t());
  }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<Scripted>(*this); }

 private:
  std::vector<AgentId> script_;
};

}  // namespace

TEST(Ef1Adversary, FixedAgentFailsAtStepTwo) {
  FixedAgent always_first(0);
  const AdversaryTrace tr = ef1_adversary_two_agents(always_first);
  ASSERT_TRUE(tr.witness);
  EXPECT_EQ(tr.witness->t, 2u);
  EXPECT_EQ(tr.witness->agent, 1u);
  EXPECT_TRUE(tr.witness->ratio.equals(0, 1));
}

TEST(Ef1Adversary, DeferredPriorityMeetsOneHalf) {
  DeferredPriority dp;
  const AdversaryTrace tr = ef1_adversary_two_agents(dp);
  ASSERT_TRUE(tr.witness);
  EXPECT_TRUE(tr.witness->meets_bound());
  EXPECT_LE(tr.choices.size(), 5u);
}

TEST(Ef1Adversary, BaselinesFallWithinFiveGoods) {
  for (const char* name : {"round-robin", "greedy-welfare"}) {
    const auto alg = make_algorithm(name);
    const AdversaryTrace tr = ef1_adversary_two_agents(*alg);
    EXPECT_TRUE(tr.success()) << name;
    EXPECT_LE(tr.witness->t, 5u) << name;
  }
}

TEST(Ef1Adversary, RefusesForesightAlgorithms) {
  const auto alg = make_algorithm("naive-matching");
  EXPECT_THROW(ef1_adversary_two_agents(*alg), std::invalid_argument);
}

TEST(MmsAdversary, DeferredPriorityExactlyMeetsBound) {
  DeferredPriority dp;
  for (std::size_t n = 2; n <= 6; ++n) {
    const AdversaryTrace tr = mms_adversary(dp, n);
    ASSERT_TRUE(tr.witness) << n;
    EXPECT_TRUE(tr.witness->ratio.equals(1, 2.0 * n - 1)) << n;
    EXPECT_LE(tr.choices.size(), 3 * n - 1);
  }
}

TEST(MmsAdversary, BaselinesAreCertified) {
  for (const char* name : {"round-robin", "greedy-welfare"}) {
    const auto alg = make_algorithm(name);
    for (std::size_t n = 2; n <= 5; ++n) {
      const AdversaryTrace tr = mms_adversary(*alg, n);
      EXPECT_TRUE(tr.success()) << name << " n=" << n;
    }
  }
  FixedAgent always_first(0);
  const AdversaryTrace tr = mms_adversary(always_first, 3);
  EXPECT_TRUE(tr.success());
  EXPECT_TRUE(tr.witness->ratio.equals(0, 1));
}

TEST(MmsAdversary, TraceReplaysToSameWitness) {
  DeferredPriority dp;
  const AdversaryTrace tr = mms_adversary(dp, 4);
  DeferredPriority again;
  Ratio worst = Ratio::one();
  run_stream(again, tr.instance, [&](const StepView& s) {
    for (const auto& a : s.ledger.report(s.state, tr.instance).agents) worst = std::min(worst, a.mms.ratio);
  });
  EXPECT_TRUE(worst.equals(tr.witness->ratio.num, tr.witness->ratio.den));
}

TEST(KnownInstance, ThreeAgentsAlphaFour) {
  const Instance inst = known_instance_hard(3, 4);
  ASSERT_EQ(inst.m(), 5u);
  EXPECT_EQ(inst.header.foresight, 4u);
  for (std::size_t t = 1; t <= 3; ++t) EXPECT_EQ(inst.good(t).mask(), (HighLowMask{0, 0, 0}));
  for (std::size_t t = 4; t <= 5; ++t) EXPECT_EQ(inst.good(t).mask(), (HighLowMask{1, 1, 1}));
  EXPECT_THROW(known_instance_hard(3, 2), std::invalid_argument);
}

TEST(KnownInstance, EveryAlgorithmDropsToOneOverN) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const Instance inst = known_instance_hard(n, static_cast<double>(n));
    for (const auto& name : algorithm_names()) {
      if (name == "naive-matching" && n != 2) continue;
      auto alg = make_algorithm(name);
      Ratio worst = Ratio::one();
      run_stream(*alg, inst, [&](const StepView& s) {
        for (const auto& a : s.ledger.report(s.state, inst).agents) worst = std::min(worst, a.mms.ratio);
      });
      EXPECT_LE(worst.num * n, worst.den) << name << " n=" << n;
    }
  }
}

TEST(KnownInstance, PriorityMatchingHitsExactlyOneOverN) {
  for (std::size_t n = 2; n <= 6; ++n) {
    const Instance inst = known_instance_hard(n, static_cast<double>(n));
    auto alg = make_algorithm("priority-matching");
    Ratio worst = Ratio::one();
    run_stream(*alg, inst, [&](const StepView& s) {
      for (const auto& a : s.ledger.report(s.state, inst).agents) worst = std::min(worst, a.mms.ratio);
    });
    EXPECT_TRUE(worst.equals(1, static_cast<double>(n))) << n;
  }
}

TEST(SqrtAlpha, GapVanishes) {
  double last = 1.0;
  for (std::size_t n : {10u, 100u, 1000u}) {
    const SqrtAlphaCheck c = sqrt_alpha_bound_check(n);
    EXPECT_TRUE(c.holds) << n;
    EXPECT_LT(c.gap, last);
    last = c.gap;
  }
}

TEST(AdversaryJson, CarriesWitnessAndSteps) {
  DeferredPriority dp;
  const auto doc = nlohmann::json::parse(to_json(mms_adversary(dp, 2)));
  EXPECT_EQ(doc["kind"], "mms");
  EXPECT_EQ(doc["algorithm"], "deferred-priority");
  EXPECT_TRUE(doc["witness"]["meets_bound"].get<bool>());
  EXPECT_EQ(doc["witness"]["bound"], "1/3");
  EXPECT_FALSE(doc["steps"].empty());
}

TEST(MmsAdversary, StaircaseIsHighForServedAgents) {
  Scripted script({2, 0, 1, 0, 0, 0, 0, 0});
  const AdversaryTrace tr = mms_adversary(script, 3);
  EXPECT_EQ(tr.instance.good(1).mask(), (HighLowMask{0, 0, 0}));
  EXPECT_EQ(tr.instance.good(2).mask(), (HighLowMask{0, 0, 1}));
  EXPECT_EQ(tr.instance.good(3).mask(), (HighLowMask{1, 0, 1}));
}

TEST(MmsAdversary, StarvedFirstLabelFollowsTargetedHighs) {
  // staircase 1,2,3; lows to 3,2 so label 1 starves; targeted highs accepted
  Scripted script({0, 1, 2, 2, 1, 2, 1});
  const AdversaryTrace tr = mms_adversary(script, 3);
  ASSERT_EQ(tr.choices.size(), 7u);
  EXPECT_EQ(tr.instance.good(6).mask(), (HighLowMask{0, 0, 1}));
  EXPECT_EQ(tr.instance.good(7).mask(), (HighLowMask{0, 1, 0}));
  EXPECT_EQ(tr.witness->agent, 0u);
  EXPECT_TRUE(tr.witness->ratio.equals(1, 5));
}

TEST(MmsAdversary, DeviationSwitchesToUniversalHighs) {
  Scripted script({0, 1, 2, 2, 1, 0, 0, 1});
  const AdversaryTrace tr = mms_adversary(script, 3);
  ASSERT_EQ(tr.choices.size(), 8u);
  EXPECT_EQ(tr.instance.good(7).mask(), (HighLowMask{1, 1, 1}));
  EXPECT_EQ(tr.instance.good(8).mask(), (HighLowMask{1, 1, 1}));
  EXPECT_LE(tr.witness->ratio.num * 6, tr.witness->ratio.den);  // at most 1/(2n)
}

TEST(MmsAdversary, StarvedLastLabelGetsUniversalHighs) {
  Scripted script({0, 1, 2, 0, 1, 0, 1});
  const AdversaryTrace tr = mms_adversary(script, 3);
  ASSERT_EQ(tr.choices.size(), 7u);
  for (std::size_t t = 6; t <= 7; ++t) EXPECT_EQ(tr.instance.good(t).mask(), (HighLowMask{1, 1, 1}));
  EXPECT_EQ(tr.witness->agent, 2u);
  EXPECT_TRUE(tr.witness->ratio.equals(1, 5));
}

TEST(AdaptiveSession, PeekDoesNotCommit) {
  InstanceHeader h;
  h.n = 2;
  h.agents.assign(2, AgentProfile::make(5, 1));
  RoundRobin rr;
  AdaptiveSession s(rr, h);
  EXPECT_EQ(s.peek({1, 1}), 0u);
  EXPECT_EQ(s.peek({0, 0}), 0u);
  EXPECT_EQ(s.t(), 0u);
  EXPECT_EQ(s.emit({1, 1}), 0u);
  EXPECT_EQ(s.peek({1, 1}), 1u);
}
