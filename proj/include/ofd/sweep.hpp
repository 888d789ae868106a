#pragma once

// Seed-corpus sweeps. Each stream is an isolated task; the parallel kernel
// fans tasks out with OpenMP and merges results in index order, so both
// kernels produce identical summaries.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ofd/deferred_priority.hpp"

namespace ofd {

struct StreamOutcome {
  std::size_t steps = 0;
  std::vector<Violation> violations;
  std::size_t events = 0;  // task-specific counter (recovery triggers, premises reached, ...)
};

struct SweepSummary {
  std::size_t streams = 0;
  std::size_t steps = 0;
  std::size_t violations = 0;
  std::size_t events = 0;
  std::vector<std::string> samples;  // first few violations, "stream k, t=..: ..."

  bool ok() const { return violations == 0; }
  bool operator==(const SweepSummary&) const = default;
};

using StreamTask = std::function<StreamOutcome(std::size_t index)>;

inline constexpr std::size_t kSampleLimit = 5;

/// Runs task(0..count-1) in order on the calling thread.
SweepSummary sweep_serial(std::size_t count, const StreamTask& task);
/// Same result as sweep_serial; tasks run across OpenMP threads.
SweepSummary sweep_parallel(std::size_t count, const StreamTask& task);

}  // namespace ofd
