#include "ofd/runner.hpp"

#include <algorithm>
#include <ostream>

namespace ofd {

std::span<const GoodEvent> foresight_window(const Instance& instance, std::size_t t, std::size_t ell) {
  const std::size_t begin = std::min(t, instance.m());
  const std::size_t end = std::min(t + ell, instance.m());
  return std::span<const GoodEvent>(instance.goods).subspan(begin, end - begin);
}

RunResult run_stream(OnlineAlgorithm& algorithm, const Instance& instance, const StepObserver& observer) {
  const std::size_t n = instance.n();
  const std::size_t need = algorithm.required_foresight(n);
  if (instance.header.foresight < need) {
    throw std::invalid_argument(algorithm.name() + " needs foresight >= " + std::to_string(need) +
                                ", instance grants " + std::to_string(instance.header.foresight));
  }
  RunResult r;
  r.algorithm = algorithm.name();
  r.state = AllocationState(n);
  r.allocation.reserve(instance.m());
  ValuationLedger ledger(n);
  algorithm.start(instance.header);
  r.trace_header = algorithm.trace_header();
  for (std::size_t t = 1; t <= instance.m(); ++t) {
    const GoodEvent& good = instance.good(t);
    const auto window = foresight_window(instance, t, instance.header.foresight);
    const AgentId agent = algorithm.choose(r.state, good, window);
    if (agent >= n) {
      throw InvariantViolation(algorithm.name() + " returned agent " + std::to_string(agent + 1) +
                               " outside 1.." + std::to_string(n));
    }
    r.state.assign(instance.header, good, agent);
    ledger.add(instance, good, agent);
    r.allocation.push_back(agent);
    r.trace_fields.push_back(algorithm.trace_fields());
    if (observer) observer(StepView{instance, r.state, good, agent, ledger});
  }
  return r;
}

AllocationState replay(const Instance& instance, std::span<const AgentId> allocation) {
  if (allocation.size() > instance.m()) throw std::invalid_argument("allocation longer than stream");
  AllocationState state(instance.n());
  for (std::size_t k = 0; k < allocation.size(); ++k) {
    state.assign(instance.header, instance.goods[k], allocation[k]);
  }
  return state;
}

void write_trace(std::ostream& out, const RunResult& result) {
  out << "t,good,allocated_to" << result.trace_header << '\n';
  for (std::size_t k = 0; k < result.allocation.size(); ++k) {
    out << (k + 1) << ',' << (k + 1) << ',' << (result.allocation[k] + 1);
    if (k < result.trace_fields.size()) out << result.trace_fields[k];
    out << '\n';
  }
}

}  // namespace ofd
