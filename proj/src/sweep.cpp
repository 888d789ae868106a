#include "ofd/sweep.hpp"

#include <exception>

#include <omp.h>

namespace ofd {

namespace {

StreamOutcome guarded(const StreamTask& task, std::size_t index) {
  try {
    return task(index);
  } catch (const std::exception& e) {
    StreamOutcome out;
    out.violations.push_back({0, std::string("exception: ") + e.what()});
    return out;
  }
}

SweepSummary merge(const std::vector<StreamOutcome>& outcomes) {
  SweepSummary s;
  s.streams = outcomes.size();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const auto& o = outcomes[k];
    s.steps += o.steps;
    s.events += o.events;
    s.violations += o.violations.size();
    for (const auto& v : o.violations) {
      if (s.samples.size() >= kSampleLimit) break;
      s.samples.push_back("stream " + std::to_string(k) + ", t=" + std::to_string(v.t) + ": " + v.what);
    }
  }
  return s;
}

}  // namespace

SweepSummary sweep_serial(std::size_t count, const StreamTask& task) {
  std::vector<StreamOutcome> outcomes(count);
  for (std::size_t k = 0; k < count; ++k) outcomes[k] = guarded(task, k);
  return merge(outcomes);
}

SweepSummary sweep_parallel(std::size_t count, const StreamTask& task) {
  std::vector<StreamOutcome> outcomes(count);
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < total; ++k) outcomes[k] = guarded(task, static_cast<std::size_t>(k));
  return merge(outcomes);
}

}  // namespace ofd
