#pragma once

// Allocators that read ahead: Naive-Matching (two agents, one good of
// foresight) and Priority-Matching (n agents, n-1 goods of foresight).

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ofd/deferred_priority.hpp"
#include "ofd/metrics.hpp"
#include "ofd/model.hpp"
#include "ofd/runner.hpp"

namespace ofd {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Two agents, pairs of goods (g, g')

enum class PairRule : std::uint8_t {
  FirstToAgent1,   // agent 1 gets g, agent 2 gets g'
  SecondToAgent1,  // agent 1 gets g', agent 2 gets g
  ContestedI,      // g low for both, g' high for both
  ContestedII,     // g high for both, g' low for both
};

/// Key bits: agent-1 high on g, agent-1 high on g', agent-2 high on g, agent-2 high on g'.
struct PairPattern {
  bool a1_first = false, a1_second = false, a2_first = false, a2_second = false;
  std::size_t key() const;
  std::string label() const;  // e.g. "ab;bb" with a = high, b = low
};

/// The 16-entry table, in key order.
const std::array<PairRule, 16>& pattern_table();
PairRule lookup(const PairPattern& p);
std::string to_string(PairRule r);
/// JSON fixture for audit: one entry per pattern with its rule.
std::string pattern_table_json();

class NaiveMatching final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "naive-matching"; }
  std::size_t required_foresight(std::size_t) const override { return 1; }
  void start(const InstanceHeader& header) override;
  AgentId choose(const AllocationState& state, const GoodEvent& good,
                 std::span<const GoodEvent> window) override;
  std::unique_ptr<OnlineAlgorithm> clone() const override;
  std::string trace_header() const override { return ",ctr,pattern,committed"; }
  std::string trace_fields() const override;

  int ctr() const { return ctr_; }

 private:
  InstanceHeader header_;
  int ctr_ = 0;
  std::optional<std::pair<std::size_t, AgentId>> commitment_;  // (good index, agent)
  std::string last_pattern_;
};

/// Strengthened even-step invariant: equal bundle sizes, and only the agent
/// singled out by ctr may envy, by at most alpha - beta.
class NaiveMatchingAudit {
 public:
  explicit NaiveMatchingAudit(const Instance& instance);
  void observe(const StepView& step, const NaiveMatching& algorithm);
  const std::vector<Violation>& violations() const { return violations_; }
  bool ok() const { return violations_.empty(); }

 private:
  const Instance* instance_;
  std::vector<Violation> violations_;
};

// ---------------------------------------------------------------------------
// n agents, rounds of n goods

/// Integer-scaled auxiliary weights: rank r (1-based in the topological
/// order) gets (2n+1)^(n-r) (2n)^(r-1), doubled for a high good.
struct AuxWeights {
  std::vector<std::vector<BigInt>> w;  // [agent][round good]
};

AuxWeights aux_weights(const InstanceHeader& header, const TopologicalOrder& order,
                       std::span<const GoodEvent> goods);

struct RoundPlan {
  std::size_t round = 0;             // 1-based
  std::size_t first_good = 0;        // index of the round's first good
  std::vector<AgentId> order;        // agents by rank
  std::vector<std::size_t> good_of;  // [agent] -> good index, 0 if none
  AuxWeights weights;

  AgentId recipient(std::size_t good_index) const;
};

/// Topologically sorts the current envy graph and matches the round's goods.
/// Throws InvariantViolation on a cyclic envy graph.
RoundPlan priority_round_plan(const EnvyGraph& envy, const InstanceHeader& header,
                              std::span<const GoodEvent> goods, std::size_t round);
RoundPlan priority_round_plan(const AllocationState& state, const Instance& instance,
                              std::span<const GoodEvent> goods, std::size_t round);

class PriorityMatching final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "priority-matching"; }
  std::size_t required_foresight(std::size_t n) const override { return n - 1; }
  void start(const InstanceHeader& header) override;
  AgentId choose(const AllocationState& state, const GoodEvent& good,
                 std::span<const GoodEvent> window) override;
  std::unique_ptr<OnlineAlgorithm> clone() const override;
  std::string trace_header() const override { return ",round,pi,committed"; }
  std::string trace_fields() const override;

  const std::vector<RoundPlan>& plans() const { return plans_; }

 private:
  Instance profiles_;  // header only; goods are not retained
  ValuationLedger ledger_;
  std::vector<RoundPlan> plans_;
};

/// Round-boundary checks (equal sizes, acyclic envy graph with edges bounded
/// by alpha - beta, EF1, 1/n-MMS, matching exchange), EF2 at every step and
/// the 1/2-EF1 recovery clause.
class PriorityMatchingAudit {
 public:
  explicit PriorityMatchingAudit(const Instance& instance, bool with_mms = true);
  void observe(const StepView& step, const PriorityMatching& algorithm);
  const std::vector<Violation>& violations() const { return violations_; }
  bool ok() const { return violations_.empty(); }
  std::size_t recovery_triggers() const { return recovery_triggers_; }

 private:
  const Instance* instance_;
  bool with_mms_;
  std::optional<std::size_t> recovery_from_;
  std::size_t recovery_triggers_ = 0;
  std::vector<Violation> violations_;
};

/// Offline form over a recorded run.
std::vector<Violation> check_priority_matching_guarantees(const Instance& instance);

/// Once every agent holds at least lambda * alpha_i, EF >= lambda/(lambda+2),
/// EF1 >= lambda/(lambda+1) and PROP >= prop_num/(prop_num + prop_gap) hold at
/// every later step.
class AsymptoticMonitor {
 public:
  AsymptoticMonitor(const Instance& instance, double lambda, double prop_gap);
  void observe(const StepView& step);
  bool premise_reached() const { return start_.has_value(); }
  std::optional<std::size_t> reached_at() const { return start_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  const Instance* instance_;
  double lambda_;
  double prop_gap_;
  std::optional<std::size_t> start_;
  std::vector<Violation> violations_;
};

/// Runs `algorithm_name` (naive-matching or priority-matching) on the
/// instance and checks the floors for lambda. Reports "not yet reached" via
/// an empty optional.
std::optional<std::vector<Violation>> check_asymptotics(const Instance& instance,
                                                        const std::string& algorithm_name, double lambda);

}  // namespace ofd
