#include "ofd/baselines.hpp"

#include "ofd/deferred_priority.hpp"
#include "ofd/foresight_matching.hpp"

namespace ofd {

AgentId RoundRobin::choose(const AllocationState&, const GoodEvent& good, std::span<const GoodEvent>) {
  return (good.index - 1) % n_;
}

AgentId GreedyWelfare::choose(const AllocationState&, const GoodEvent& good, std::span<const GoodEvent>) {
  AgentId best = 0;
  double best_value = value(header_.agents[0], good, 0);
  for (AgentId i = 1; i < header_.n; ++i) {
    const double v = value(header_.agents[i], good, i);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"deferred-priority", "naive-matching", "priority-matching",
                                                 "round-robin", "greedy-welfare"};
  return names;
}

std::unique_ptr<OnlineAlgorithm> make_algorithm(const std::string& name) {
  if (name == "deferred-priority") return std::make_unique<DeferredPriority>();
  if (name == "naive-matching") return std::make_unique<NaiveMatching>();
  if (name == "priority-matching") return std::make_unique<PriorityMatching>();
  if (name == "round-robin") return std::make_unique<RoundRobin>();
  if (name == "greedy-welfare") return std::make_unique<GreedyWelfare>();
  throw std::invalid_argument("unknown algorithm \"" + name + "\"");
}

}  // namespace ofd
