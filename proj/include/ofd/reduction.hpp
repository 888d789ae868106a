#pragma once

// Rounding interval-restricted valuations to a two-value proxy with values
// {sqrt(alpha_i), alpha_i}, and carrying guarantees back at a sqrt(alpha_i) cost.

#include <span>
#include <string>
#include <vector>

#include "ofd/deferred_priority.hpp"
#include "ofd/metrics.hpp"
#include "ofd/model.hpp"

namespace ofd {

/// alpha if v > sqrt(alpha) beyond a 1e-9 relative slack, sqrt(alpha) otherwise.
double threshold_value(double v, double alpha);

struct ThresholdProxy {
  Instance original;            // interval flavor
  Instance proxy;               // two-value flavor, agents (alpha_i, sqrt(alpha_i))
  std::vector<double> sqrt_alpha;  // per-agent threshold
};

ThresholdProxy threshold_round(const Instance& interval);

/// Per-agent thresholds and the transfer factors, as JSON.
std::string thresholds_json(const ThresholdProxy& p);

/// max_i alpha_i.
double max_alpha(const Instance& instance);
/// The transfer factor sqrt(max_i alpha_i) = max_i sqrt(alpha_i) used in the
/// instance-wide bounds.
double transfer_factor(const Instance& instance);

/// v_hat(S)/sqrt(alpha) <= v(S) <= v_hat(S) for the given goods.
bool sandwich_holds(const ThresholdProxy& p, AgentId agent, std::span<const std::size_t> goods);

/// mu_i over the original values of the first t goods <= mu_i over the proxy
/// values. t <= 12.
bool mms_dominated(const ThresholdProxy& p, AgentId agent, std::size_t t);

struct LiftResult {
  FairnessReport proxy;
  FairnessReport original;
  std::vector<Violation> violations;  // original < proxy / sqrt(alpha_i)
};

/// Both reports at the end of `allocation` (a prefix run on the proxy), and
/// the per-agent transfer check for EF, EF1, EF2, PROP and MMS.
LiftResult lift_guarantee(const ThresholdProxy& p, std::span<const AgentId> allocation);

}  // namespace ofd
