#pragma once

// Drives an OnlineAlgorithm over an instance while honouring the foresight
// contract, and replays recorded allocations.

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ofd/metrics.hpp"
#include "ofd/model.hpp"

namespace ofd {

/// Goods t+1..t+ell (1-based t), truncated at the end of the stream.
std::span<const GoodEvent> foresight_window(const Instance& instance, std::size_t t, std::size_t ell);

struct StepView {
  const Instance& instance;
  const AllocationState& state;  // after the allocation
  const GoodEvent& good;
  AgentId agent;
  const ValuationLedger& ledger;
};

using StepObserver = std::function<void(const StepView&)>;

struct RunResult {
  std::string algorithm;
  std::vector<AgentId> allocation;  // allocation[t-1] = recipient of good t
  std::string trace_header;         // algorithm-specific extra columns
  std::vector<std::string> trace_fields;
  AllocationState state;
};

/// Throws std::invalid_argument when the instance grants less foresight than
/// the algorithm needs.
RunResult run_stream(OnlineAlgorithm& algorithm, const Instance& instance,
                     const StepObserver& observer = {});

AllocationState replay(const Instance& instance, std::span<const AgentId> allocation);

/// t,good,allocated_to[,extra...]; agents 1-based.
void write_trace(std::ostream& out, const RunResult& result);

}  // namespace ofd
