#include "ofd/reduction.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ofd/format.hpp"
#include "ofd/runner.hpp"

namespace ofd {

double threshold_value(double v, double alpha) {
  const double s = std::sqrt(alpha);
  return v > s * (1.0 + kRelTol) ? alpha : s;
}

ThresholdProxy threshold_round(const Instance& interval) {
  if (interval.header.flavor != Flavor::IntervalRestricted) {
    throw std::invalid_argument("threshold rounding expects an interval-restricted instance");
  }
  interval.validate();
  ThresholdProxy p;
  p.original = interval;
  const std::size_t n = interval.n();
  p.proxy.header.n = n;
  p.proxy.header.flavor = Flavor::TwoValue;
  p.proxy.header.foresight = interval.header.foresight;
  for (const auto& a : interval.header.agents) {
    const double s = std::sqrt(a.alpha);
    p.sqrt_alpha.push_back(s);
    p.proxy.header.agents.push_back(AgentProfile::make(a.alpha, s));
  }
  for (const auto& g : interval.goods) {
    HighLowMask mask(n);
    for (AgentId i = 0; i < n; ++i) {
      mask[i] = threshold_value(g.reals()[i], interval.agent(i).alpha) == interval.agent(i).alpha ? 1 : 0;
    }
    p.proxy.goods.push_back(GoodEvent::two_value(g.index, std::move(mask)));
  }
  p.proxy.validate();
  return p;
}

double max_alpha(const Instance& instance) {
  double best = 0.0;
  for (const auto& a : instance.header.agents) best = std::max(best, a.alpha);
  return best;
}

double transfer_factor(const Instance& instance) { return std::sqrt(max_alpha(instance)); }

std::string thresholds_json(const ThresholdProxy& p) {
  nlohmann::ordered_json doc;
  doc["n"] = p.original.n();
  auto agents = nlohmann::ordered_json::array();
  for (AgentId i = 0; i < p.original.n(); ++i) {
    agents.push_back({{"agent", i + 1}, {"alpha", p.original.agent(i).alpha}, {"sqrt_alpha", p.sqrt_alpha[i]}});
  }
  doc["agents"] = agents;
  doc["max_alpha"] = max_alpha(p.original);
  doc["transfer_factor"] = transfer_factor(p.original);
  doc["rule"] = "value > sqrt(alpha) -> alpha, otherwise sqrt(alpha)";
  return doc.dump(2);
}

bool sandwich_holds(const ThresholdProxy& p, AgentId agent, std::span<const std::size_t> goods) {
  const double v = bundle_value(p.original, goods, agent);
  const double vh = bundle_value(p.proxy, goods, agent);
  const double slack = kRelTol * std::max(1.0, vh);
  return vh / p.sqrt_alpha[agent] <= v + slack && v <= vh + slack;
}

bool mms_dominated(const ThresholdProxy& p, AgentId agent, std::size_t t) {
  std::vector<double> vals;
  std::size_t highs = 0;
  for (std::size_t g = 1; g <= t; ++g) {
    vals.push_back(value(p.original.agent(agent), p.original.good(g), agent));
    if (p.proxy.good(g).mask()[agent]) ++highs;
  }
  const auto& a = p.proxy.agent(agent);
  const double mu = mms_exhaustive(vals, p.original.n());
  const double mu_hat = mms_two_value(highs, t - highs, a.alpha, a.beta, p.original.n());
  return mu <= mu_hat + kRelTol * std::max(1.0, mu_hat);
}

LiftResult lift_guarantee(const ThresholdProxy& p, std::span<const AgentId> allocation) {
  LiftResult r;
  const AllocationState proxy_state = replay(p.proxy, allocation);
  const AllocationState original_state = replay(p.original, allocation);
  r.proxy = compute_report(proxy_state, p.proxy);
  r.original = compute_report(original_state, p.original);
  const std::size_t t = allocation.size();
  for (AgentId i = 0; i < p.original.n(); ++i) {
    const double s = p.sqrt_alpha[i];
    const auto& o = r.original.agents[i];
    const auto& h = r.proxy.agents[i];
    auto check = [&](const char* metric, const Ratio& orig, const Ratio& prox) {
      if (!orig.at_least(prox.num, prox.den * s, kRelTol)) {
        r.violations.push_back({t, std::string(metric) + " transfer fails for agent " + std::to_string(i + 1) + ": " +
                                       format_real(orig.value()) + " < " + format_real(prox.value()) + "/" +
                                       format_real(s)});
      }
    };
    check("ef", o.ef, h.ef);
    check("ef1", o.ef1, h.ef1);
    check("ef2", o.ef2, h.ef2);
    check("prop", o.prop, h.prop);
    if (o.mms.available && h.mms.available) check("mms", o.mms.ratio, h.mms.ratio);
  }
  return r;
}

}  // namespace ofd
