#include "ofd/deferred_priority.hpp"

#include <algorithm>

#include "ofd/format.hpp"

namespace ofd {

PriorityState PriorityState::initial(std::size_t n) {
  PriorityState ps;
  const auto nn = static_cast<std::int64_t>(n);
  ps.H.assign(n, nn);
  ps.L.assign(n, 2 * nn - 1);
  ps.chi.assign(n, 0);
  return ps;
}

DpDecision dp_step(PriorityState& ps, const InstanceHeader& header, const GoodEvent& good) {
  const std::size_t n = ps.n();
  const auto nn = static_cast<std::int64_t>(n);
  ++ps.t;
  std::vector<std::uint8_t> high(n), low(n);
  for (AgentId i = 0; i < n; ++i) {
    const auto& a = header.agents[i];
    high[i] = sees_high(a, good, i);
    low[i] = sees_low(a, good, i);
    if (high[i] && a.alpha > 0.0) {
      --ps.H[i];
    } else {
      --ps.L[i];
    }
  }
  DpDecision d;
  d.phase = ps.phase;
  bool found = false;
  for (AgentId i = 0; i < n; ++i) {
    if (high[i] && !ps.chi[i] && (!found || ps.H[i] < ps.H[d.agent])) {
      d.agent = i;
      found = true;
    }
  }
  if (found) {
    d.as_high = true;
    ++ps.high;
    ps.H[d.agent] += 3 * nn - 2;
    ps.chi[d.agent] = 1;
  } else {
    for (AgentId i = 0; i < n; ++i) {
      if (low[i] && !ps.chi[i] && (!found || ps.L[i] < ps.L[d.agent])) {
        d.agent = i;
        found = true;
      }
    }
    if (!found) {
      throw InvariantViolation("deferred-priority: no active agent for good " + std::to_string(good.index));
    }
    ++ps.low;
    ps.L[d.agent] = 2 * nn + static_cast<std::int64_t>(ps.t);
    if (ps.phase == 0) ps.chi[d.agent] = 1;
  }
  if ((ps.phase == 0 && ps.low + ps.high == n) || (ps.phase > 0 && std::max(ps.low, ps.high) == n)) {
    ++ps.phase;
    ps.low = ps.high = 0;
    std::fill(ps.L.begin(), ps.L.end(), 2 * nn - 1);
    std::fill(ps.chi.begin(), ps.chi.end(), 0);
    d.closed_phase = true;
  }
  return d;
}

bool check_level_sets(const PriorityState& ps) {
  const auto n = static_cast<std::int64_t>(ps.n());
  for (std::int64_t k = 0; k <= n; ++k) {
    const auto at_most_k = std::count_if(ps.H.begin(), ps.H.end(), [k](std::int64_t h) { return h <= k; });
    if (at_most_k > k) return false;
  }
  return true;
}

void DeferredPriority::start(const InstanceHeader& header) {
  header_ = header;
  ps_ = PriorityState::initial(header.n);
  last_ = {};
}

AgentId DeferredPriority::choose(const AllocationState&, const GoodEvent& good, std::span<const GoodEvent>) {
  last_ = dp_step(ps_, header_, good);
  return last_.agent;
}

std::unique_ptr<OnlineAlgorithm> DeferredPriority::clone() const {
  return std::make_unique<DeferredPriority>(*this);
}

std::string DeferredPriority::trace_fields() const {
  auto num = [](auto v) { return std::to_string(v); };
  return "," + std::to_string(last_.as_high ? 1 : 0) + "," + std::to_string(last_.phase) + "," +
         join(ps_.H, ';', num) + "," + join(ps_.L, ';', num) + "," + join(ps_.chi, ';', [](std::uint8_t c) {
           return std::to_string(static_cast<int>(c));
         });
}

// ---------------------------------------------------------------------------

StructuralMonitor::StructuralMonitor(const Instance& instance)
    : instance_(&instance), reached_n_highs_(instance.n(), 0) {}

void StructuralMonitor::observe(const AllocationState& state) {
  const std::size_t n = state.n();
  const std::size_t t = state.t();
  for (AgentId i = 0; i < n; ++i) {
    const std::string who = "agent " + std::to_string(i + 1);
    const std::size_t have = state.goods_received(i);
    if (t <= n && have > 1) violations_.push_back({t, who + " holds " + std::to_string(have) + " goods within the first n"});
    if (t == n && have != 1) violations_.push_back({t, who + " does not hold exactly one of the first n goods"});
    if (t >= n && have < (t - n) / (2 * n - 1) + 1) {
      violations_.push_back({t, who + " holds " + std::to_string(have) + " goods, below the 2n-1 rate"});
    }
    if (instance_->agent(i).kind == AgentType::Type0) continue;  // alpha = 0: no high goods to track
    const std::size_t seen = state.high_seen(i);
    const std::size_t got = state.high_received(i);
    if (got < seen / (3 * n - 2)) {
      violations_.push_back({t, who + " holds " + std::to_string(got) + " high goods after seeing " +
                                    std::to_string(seen)});
    }
    if (!reached_n_highs_[i] && seen >= n) {
      reached_n_highs_[i] = 1;
      if (got < 1) violations_.push_back({t, who + " saw n high goods without receiving one"});
    }
  }
}

std::vector<Violation> check_share_floors(const FairnessReport& report, const AllocationState& state,
                                          const Instance& instance) {
  std::vector<Violation> out;
  const double n = static_cast<double>(state.n());
  for (AgentId i = 0; i < report.agents.size(); ++i) {
    const auto& a = report.agents[i];
    const std::string who = "agent " + std::to_string(i + 1);
    double floor_den = 0.0;
    switch (instance.agent(i).kind) {
      case AgentType::Type2: floor_den = 2.0; break;
      case AgentType::Type3: floor_den = 3.0; break;
      case AgentType::Type1: floor_den = 2.0 * n - 1.0; break;
      case AgentType::Type0: break;
    }
    if (floor_den > 0.0 && a.mms.available && !a.mms.ratio.at_least(1.0, floor_den)) {
      out.push_back({report.t, who + " mms ratio " + format_real(a.mms.ratio.value()) + " below 1/" +
                                   format_real(floor_den)});
    }
    if (instance.agent(i).kind == AgentType::Type1 && state.high_received(i) >= 1 &&
        !a.prop.at_least(1.0, 4.0)) {
      out.push_back({report.t, who + " prop ratio " + format_real(a.prop.value()) + " below 1/4"});
    }
  }
  return out;
}

DeferredPriorityAudit::DeferredPriorityAudit(const Instance& instance, bool with_shares)
    : instance_(&instance),
      with_shares_(with_shares),
      structural_(instance),
      got_high_in_phase_(instance.n(), 0),
      last_low_(instance.n(), 0) {}

void DeferredPriorityAudit::fail(std::size_t t, std::string what) {
  violations_.push_back({t, std::move(what)});
}

void DeferredPriorityAudit::observe(const StepView& step, const DeferredPriority& algorithm) {
  const std::size_t t = step.state.t();
  const std::size_t n = step.state.n();
  const PriorityState& ps = algorithm.state();
  const DpDecision& d = algorithm.last();

  const std::size_t before = structural_.violations().size();
  structural_.observe(step.state);
  for (std::size_t k = before; k < structural_.violations().size(); ++k) violations_.push_back(structural_.violations()[k]);

  for (AgentId i = 0; i < n; ++i) {
    if (ps.H[i] < 1) fail(t, "H[" + std::to_string(i + 1) + "] = " + std::to_string(ps.H[i]));
  }
  if (!check_level_sets(ps)) fail(t, "level-set condition violated");

  // Phase bookkeeping refers to the phase the good was allocated in.
  const AgentId j = d.agent;
  if (d.phase > 0) {
    if (got_high_in_phase_[j]) fail(t, "agent " + std::to_string(j + 1) + " served again after a high good");
    if (d.as_high) {
      got_high_in_phase_[j] = 1;
    } else {
      if (last_low_[j] != 0) {
        for (AgentId k = 0; k < n; ++k) {
          if (k == j) continue;
          const bool inactive = got_high_in_phase_[k] != 0;
          if (!inactive && last_low_[k] <= last_low_[j]) {
            fail(t, "agent " + std::to_string(j + 1) + " got a second low good before agent " + std::to_string(k + 1));
          }
        }
      }
      last_low_[j] = t;
    }
  }
  const std::size_t length = t - phase_start_ + 1;
  if (d.phase == 0 && d.closed_phase && t != std::min(n, instance_->m())) fail(t, "phase 0 closed early");
  if (d.phase > 0 && length > 2 * n - 1) fail(t, "phase " + std::to_string(d.phase) + " longer than 2n-1");
  if (d.closed_phase) {
    phase_start_ = t + 1;
    phase_ = ps.phase;
    std::fill(got_high_in_phase_.begin(), got_high_in_phase_.end(), 0);
    std::fill(last_low_.begin(), last_low_.end(), 0);
  }

  if (with_shares_) {
    const FairnessReport report = step.ledger.report(step.state, step.instance);
    for (auto& v : check_share_floors(report, step.state, step.instance)) violations_.push_back(std::move(v));
  }
}

std::vector<Violation> check_structural_guarantees(const Instance& instance, std::span<const AgentId> allocation) {
  StructuralMonitor monitor(instance);
  AllocationState state(instance.n());
  for (std::size_t k = 0; k < allocation.size(); ++k) {
    state.assign(instance.header, instance.goods.at(k), allocation[k]);
    monitor.observe(state);
  }
  return monitor.violations();
}

std::vector<Violation> check_share_guarantees(const Instance& instance, std::span<const AgentId> allocation) {
  std::vector<Violation> out;
  AllocationState state(instance.n());
  ValuationLedger ledger(instance.n());
  for (std::size_t k = 0; k < allocation.size(); ++k) {
    state.assign(instance.header, instance.goods.at(k), allocation[k]);
    ledger.add(instance, instance.goods[k], allocation[k]);
    for (auto& v : check_share_floors(ledger.report(state, instance), state, instance)) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace ofd
