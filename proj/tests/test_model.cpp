#include <gtest/gtest.h>

#include <sstream>

#include "ofd/baselines.hpp"
#include "ofd/instance_io.hpp"
#include "ofd/model.hpp"
#include "ofd/runner.hpp"

using namespace ofd;

namespace {

Instance two_agent(std::vector<HighLowMask> masks, std::size_t foresight = 0) {
  Instance inst;
  inst.header.n = 2;
  inst.header.agents = {AgentProfile::make(5, 1), AgentProfile::make(5, 1)};
  inst.header.foresight = foresight;
  for (std::size_t k = 0; k < masks.size(); ++k) inst.goods.push_back(GoodEvent::two_value(k + 1, masks[k]));
  return inst;
}

}  // namespace

TEST(AgentTypes, ClassifiesByValues) {
  EXPECT_EQ(classify_agent(5, 1), AgentType::Type1);
  EXPECT_EQ(classify_agent(0, 0), AgentType::Type0);
  EXPECT_EQ(classify_agent(1, 0), AgentType::Type3);
  EXPECT_EQ(classify_agent(3, 3), AgentType::Type2);
  EXPECT_THROW(classify_agent(1, 2), std::invalid_argument);
  EXPECT_THROW(classify_agent(1, -1), std::invalid_argument);
}

TEST(Valuation, MaskAndRealEntries) {
  const auto a = AgentProfile::make(5, 1);
  EXPECT_EQ(value(a, GoodEvent::two_value(1, {1}), 0), 5);
  EXPECT_EQ(value(a, GoodEvent::two_value(1, {0}), 0), 1);
  EXPECT_EQ(value(AgentProfile::make(4, 1), GoodEvent::interval(1, {2.75}), 0), 2.75);
}

TEST(Valuation, TypeTwoSeesEveryGoodAsHigh) {
  const auto a = AgentProfile::make(1, 1);
  EXPECT_TRUE(sees_high(a, GoodEvent::two_value(1, {0}), 0));
  EXPECT_TRUE(sees_low(a, GoodEvent::two_value(1, {1}), 0));
}

TEST(Instance, ValidationRejectsBadShapes) {
  Instance inst = two_agent({{1, 0}});
  EXPECT_NO_THROW(inst.validate());
  inst.goods[0] = GoodEvent::two_value(1, {1});
  EXPECT_THROW(inst.validate(), std::invalid_argument);
  inst = two_agent({{1, 0}});
  inst.goods[0].index = 2;
  EXPECT_THROW(inst.validate(), std::invalid_argument);
}

TEST(AllocationState, TracksCounts) {
  const Instance inst = two_agent({{1, 0}, {0, 0}, {1, 1}});
  const AllocationState s = replay(inst, std::vector<AgentId>{0, 0, 1});
  EXPECT_EQ(s.t(), 3u);
  EXPECT_EQ(s.goods_received(0), 2u);
  EXPECT_EQ(s.high_received(0), 1u);
  EXPECT_EQ(s.high_received(1), 1u);
  EXPECT_EQ(s.high_seen(0), 2u);
  EXPECT_EQ(s.high_seen(1), 1u);
  EXPECT_EQ(s.owner(3), 1u);
}

TEST(AllocationState, RejectsOutOfOrderGoods) {
  const Instance inst = two_agent({{1, 0}, {0, 0}});
  AllocationState s(2);
  EXPECT_THROW(s.assign(inst.header, inst.goods[1], 0), std::invalid_argument);
}

TEST(InstanceIo, RoundTripsBothFlavors) {
  Instance inst = two_agent({{1, 0}, {0, 1}}, 1);
  std::stringstream ss;
  write_instance(ss, inst);
  const std::string first = ss.str();
  const Instance back = read_instance(ss);
  std::stringstream again;
  write_instance(again, back);
  EXPECT_EQ(first, again.str());

  Instance iv;
  iv.header.n = 1;
  iv.header.flavor = Flavor::IntervalRestricted;
  iv.header.agents = {AgentProfile::make(9, 1)};
  iv.goods = {GoodEvent::interval(1, {2.5}), GoodEvent::interval(2, {9})};
  std::stringstream s2;
  write_instance(s2, iv);
  const Instance iv_back = read_instance(s2);
  EXPECT_EQ(iv_back.good(1).reals()[0], 2.5);
}

TEST(InstanceIo, ReportsLineOfMalformedGood) {
  std::stringstream ss;
  ss << R"({"n":2,"agents":[{"alpha":5,"beta":1},{"alpha":5,"beta":1}],"flavor":"two_value","foresight":0})" << "\n";
  ss << R"({"high":[true,false]})" << "\n";
  ss << R"({"high":[true]})" << "\n";
  try {
    read_instance(ss);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(InstanceIo, ReportsLineOfBadJson) {
  std::stringstream ss;
  ss << R"({"n":1,"agents":[{"alpha":5,"beta":1}],"flavor":"two_value","foresight":0})" << "\n{oops\n";
  try {
    read_instance(ss);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Runner, ForesightWindowIsClipped) {
  const Instance inst = two_agent({{1, 0}, {0, 0}, {1, 1}}, 2);
  EXPECT_EQ(foresight_window(inst, 1, 2).size(), 2u);
  EXPECT_EQ(foresight_window(inst, 2, 2).size(), 1u);
  EXPECT_EQ(foresight_window(inst, 3, 2).size(), 0u);
}

TEST(Runner, RejectsMissingForesight) {
  const Instance inst = two_agent({{1, 0}, {0, 0}}, 0);
  auto alg = make_algorithm("naive-matching");
  EXPECT_THROW(run_stream(*alg, inst), std::invalid_argument);
}

TEST(Runner, TraceHasOneRowPerGood) {
  const Instance inst = two_agent({{1, 0}, {0, 0}, {1, 1}});
  RoundRobin rr;
  const RunResult r = run_stream(rr, inst);
  std::stringstream ss;
  write_trace(ss, r);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "t,good,allocated_to");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(Baselines, RoundRobinCycles) {
  Instance inst = two_agent({{0, 0}, {0, 0}, {0, 0}});
  inst.header.n = 2;
  RoundRobin rr;
  const auto r = run_stream(rr, inst);
  EXPECT_EQ(r.allocation, (std::vector<AgentId>{0, 1, 0}));
}

TEST(Baselines, GreedyBreaksTiesLowestIndex) {
  Instance inst;
  inst.header.n = 3;
  inst.header.agents = {AgentProfile::make(2, 1), AgentProfile::make(5, 1), AgentProfile::make(5, 1)};
  inst.goods = {GoodEvent::two_value(1, {1, 1, 1}), GoodEvent::two_value(2, {1, 0, 0}),
                GoodEvent::two_value(3, {0, 0, 0})};
  GreedyWelfare g;
  EXPECT_EQ(run_stream(g, inst).allocation, (std::vector<AgentId>{1, 0, 0}));
}

TEST(Baselines, FactoryKnowsEveryName) {
  for (const auto& name : algorithm_names()) EXPECT_EQ(make_algorithm(name)->name(), name);
  EXPECT_THROW(make_algorithm("nope"), std::invalid_argument);
}
