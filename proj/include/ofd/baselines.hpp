#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ofd/model.hpp"

namespace ofd {

/// Good t goes to agent ((t-1) mod n) + 1.
class RoundRobin final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "round-robin"; }
  void start(const InstanceHeader& header) override { n_ = header.n; }
  AgentId choose(const AllocationState& state, const GoodEvent& good,
                 std::span<const GoodEvent> window) override;
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<RoundRobin>(*this); }

 private:
  std::size_t n_ = 0;
};

/// Each good to an agent valuing it most, lowest index on ties. No guarantee.
class GreedyWelfare final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "greedy-welfare"; }
  void start(const InstanceHeader& header) override { header_ = header; }
  AgentId choose(const AllocationState& state, const GoodEvent& good,
                 std::span<const GoodEvent> window) override;
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<GreedyWelfare>(*this); }

 private:
  InstanceHeader header_;
};

/// Every good to the same agent; handy as a worst case.
class FixedAgent final : public OnlineAlgorithm {
 public:
  explicit FixedAgent(AgentId agent = 0) : agent_(agent) {}
  std::string name() const override { return "fixed-agent-" + std::to_string(agent_ + 1); }
  void start(const InstanceHeader&) override {}
  AgentId choose(const AllocationState&, const GoodEvent&, std::span<const GoodEvent>) override { return agent_; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<FixedAgent>(*this); }

 private:
  AgentId agent_;
};

const std::vector<std::string>& algorithm_names();

/// deferred-priority, naive-matching, priority-matching, round-robin, greedy-welfare.
std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name);

}  // namespace ofd
