#pragma once

// The acceptance suite: eleven seeded, exact checks of the library's
// guarantees, each reported as one pass/fail line.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ofd/sweep.hpp"

namespace ofd {

struct AcceptanceOptions {
  bool parallel = true;
  double scale = 1.0;  // fraction of each corpus to run (1 = full size)
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 = none
  std::string detail;
  std::vector<std::string> samples;

  std::string line() const;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// Seed of stream `index` in a criterion's corpus.
std::uint64_t corpus_seed(int criterion, std::size_t n, std::size_t index);

/// Per-stream tasks behind the corpus criteria, exposed for the benchmark and tests.
StreamOutcome dp_structural_stream(std::size_t n, std::uint64_t seed);
StreamOutcome dp_level_set_stream(std::size_t n, std::uint64_t seed);
StreamOutcome dp_share_stream(std::size_t n, std::uint64_t seed);
StreamOutcome naive_matching_stream(std::uint64_t seed);
StreamOutcome priority_matching_stream(std::size_t n, std::uint64_t seed);
StreamOutcome reduction_stream(std::uint64_t seed);
StreamOutcome asymptotic_stream(const std::string& algorithm, std::size_t n, std::uint64_t seed);

}  // namespace ofd
