#pragma once

// Deferred-Priority: the no-foresight algorithm that keeps every agent's
// high-good deficit below n and hands out one good per agent in phase 0.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ofd/metrics.hpp"
#include "ofd/model.hpp"
#include "ofd/runner.hpp"

namespace ofd {

struct PriorityState {
  std::vector<std::int64_t> H;  // high-loss tolerance
  std::vector<std::int64_t> L;  // low-good priority, smaller is served first
  std::vector<std::uint8_t> chi;  // 1 = inactive for the rest of the phase
  std::size_t phase = 0;
  std::size_t low = 0;
  std::size_t high = 0;
  std::size_t t = 0;

  static PriorityState initial(std::size_t n);
  std::size_t n() const { return H.size(); }
};

struct DpDecision {
  AgentId agent = 0;
  bool as_high = false;
  std::size_t phase = 0;      // phase the good was allocated in
  bool closed_phase = false;  // this step ended that phase
};

/// One arrival. Throws InvariantViolation if nobody is eligible.
DpDecision dp_step(PriorityState& ps, const InstanceHeader& header, const GoodEvent& good);

/// |H_0 u ... u H_k| <= k for every 0 <= k <= n.
bool check_level_sets(const PriorityState& ps);

class DeferredPriority final : public OnlineAlgorithm {
 public:
  std::string name() const override { return "deferred-priority"; }
  void start(const InstanceHeader& header) override;
  AgentId choose(const AllocationState& state, const GoodEvent& good,
                 std::span<const GoodEvent> window) override;
  std::unique_ptr<OnlineAlgorithm> clone() const override;
  std::string trace_header() const override { return ",as_high,phase,H,L,chi"; }
  std::string trace_fields() const override;

  const PriorityState& state() const { return ps_; }
  const DpDecision& last() const { return last_; }

 private:
  InstanceHeader header_;
  PriorityState ps_;
  DpDecision last_;
};

struct Violation {
  std::size_t t = 0;
  std::string what;
};

/// Structural guarantees: one good each in the first n steps, a high good for
/// every 3n-2 seen (and one by the time n have been seen), and one good in
/// every 2n-1 steps after the first n.
class StructuralMonitor {
 public:
  explicit StructuralMonitor(const Instance& instance);
  void observe(const AllocationState& state);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  const Instance* instance_;
  std::vector<std::uint8_t> reached_n_highs_;
  std::vector<Violation> violations_;
};

/// Per-type MMS floors (1/2, 1/3, 1/(2n-1)) and the 1/4-PROP floor for
/// type-1 agents holding a high good.
std::vector<Violation> check_share_floors(const FairnessReport& report, const AllocationState& state,
                                          const Instance& instance);

/// Everything above plus H >= 1, level sets, phase lengths, inactivity after a
/// high good and low-good rotation, fed one step at a time.
class DeferredPriorityAudit {
 public:
  explicit DeferredPriorityAudit(const Instance& instance, bool with_shares = true);
  void observe(const StepView& step, const DeferredPriority& algorithm);
  const std::vector<Violation>& violations() const { return violations_; }
  bool ok() const { return violations_.empty(); }

 private:
  void fail(std::size_t t, std::string what);

  const Instance* instance_;
  bool with_shares_;
  StructuralMonitor structural_;
  std::size_t phase_ = 0;
  std::size_t phase_start_ = 1;
  std::vector<std::uint8_t> got_high_in_phase_;
  std::vector<std::size_t> last_low_;  // 0 = none this phase
  std::vector<Violation> violations_;
};

/// Offline forms over a recorded allocation.
std::vector<Violation> check_structural_guarantees(const Instance& instance, std::span<const AgentId> allocation);
std::vector<Violation> check_share_guarantees(const Instance& instance, std::span<const AgentId> allocation);

}  // namespace ofd
