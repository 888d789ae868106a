#include "ofd/model.hpp"

#include <cmath>
#include <string>

namespace ofd {

AgentType classify_agent(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || beta < 0.0 || alpha < beta) {
    throw std::invalid_argument("agent values must satisfy alpha >= beta >= 0 (got alpha=" +
                                std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
  if (alpha == 0.0) return AgentType::Type0;
  if (alpha == beta) return AgentType::Type2;
  if (beta == 0.0) return AgentType::Type3;
  return AgentType::Type1;
}

std::string_view to_string(AgentType type) {
  switch (type) {
    case AgentType::Type0: return "type0";
    case AgentType::Type1: return "type1";
    case AgentType::Type2: return "type2";
    case AgentType::Type3: return "type3";
  }
  return "?";
}

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::TwoValue ? "two_value" : "interval";
}

AgentProfile AgentProfile::make(double alpha, double beta) {
  return AgentProfile{alpha, beta, classify_agent(alpha, beta)};
}

std::size_t GoodEvent::width() const {
  return std::visit([](const auto& v) { return v.size(); }, values);
}

GoodEvent GoodEvent::two_value(std::size_t index, HighLowMask mask) {
  return GoodEvent{index, std::move(mask)};
}

GoodEvent GoodEvent::interval(std::size_t index, RealVector values) {
  return GoodEvent{index, std::move(values)};
}

void validate_header(const InstanceHeader& header) {
  if (header.n == 0) throw std::invalid_argument("instance needs at least one agent");
  if (header.agents.size() != header.n) {
    throw std::invalid_argument("agent list has " + std::to_string(header.agents.size()) +
                                " entries, expected n=" + std::to_string(header.n));
  }
  for (const auto& a : header.agents) {
    if (classify_agent(a.alpha, a.beta) != a.kind) {
      throw std::invalid_argument("agent kind does not match its (alpha, beta)");
    }
    if (header.flavor == Flavor::IntervalRestricted && !(a.alpha > 1.0)) {
      throw std::invalid_argument("interval-restricted agents need alpha > 1");
    }
  }
}

void validate_event(const InstanceHeader& header, const GoodEvent& event) {
  if (event.index == 0) throw std::invalid_argument("good index is 1-based");
  if (event.width() != header.n) {
    throw std::invalid_argument("good " + std::to_string(event.index) + " has " +
                                std::to_string(event.width()) + " entries, expected " +
                                std::to_string(header.n));
  }
  if (header.flavor == Flavor::TwoValue) {
    if (!event.is_mask()) throw std::invalid_argument("two-value instances carry high/low masks");
    return;
  }
  if (event.is_mask()) throw std::invalid_argument("interval instances carry real values");
  const auto& v = event.reals();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double hi = header.agents[i].alpha;
    if (!std::isfinite(v[i]) || v[i] < 1.0 || v[i] > hi) {
      throw std::invalid_argument("good " + std::to_string(event.index) + ": value " +
                                  std::to_string(v[i]) + " outside [1, " + std::to_string(hi) +
                                  "] for agent " + std::to_string(i + 1));
    }
  }
}

void Instance::validate() const {
  validate_header(header);
  for (std::size_t k = 0; k < goods.size(); ++k) {
    if (goods[k].index != k + 1) throw std::invalid_argument("goods must be indexed 1..m in order");
    validate_event(header, goods[k]);
  }
}

double value(const AgentProfile& profile, const GoodEvent& event, AgentId agent) {
  if (agent >= event.width()) throw std::out_of_range("agent index out of range");
  if (event.is_mask()) return event.mask()[agent] ? profile.alpha : profile.beta;
  return event.reals()[agent];
}

bool sees_high(const AgentProfile& profile, const GoodEvent& event, AgentId agent) {
  if (event.is_mask()) return event.mask().at(agent) != 0 || profile.alpha == profile.beta;
  return event.reals().at(agent) == profile.alpha;
}

bool sees_low(const AgentProfile& profile, const GoodEvent& event, AgentId agent) {
  if (event.is_mask()) return event.mask().at(agent) == 0 || profile.alpha == profile.beta;
  return event.reals().at(agent) == profile.beta;
}

AllocationState::AllocationState(std::size_t n)
    : bundles_(n), goods_received_(n, 0), high_received_(n, 0), high_seen_(n, 0) {}

void AllocationState::assign(const InstanceHeader& header, const GoodEvent& event, AgentId agent) {
  if (event.index != t_ + 1) {
    throw std::invalid_argument("good " + std::to_string(event.index) +
                                " allocated out of order at t=" + std::to_string(t_));
  }
  if (agent >= n()) throw std::out_of_range("recipient index out of range");
  ++t_;
  bundles_[agent].push_back(event.index);
  owner_.push_back(agent);
  ++goods_received_[agent];
  for (AgentId i = 0; i < n(); ++i) {
    if (sees_high(header.agents[i], event, i)) {
      ++high_seen_[i];
      if (i == agent) ++high_received_[i];
    }
  }
}

}  // namespace ofd
