#include "ofd/adversaries.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ofd/format.hpp"

namespace ofd {

bool Witness::certified() const { return ratio.num * bound_den <= bound_num * ratio.den; }
bool Witness::meets_bound() const { return ratio.equals(bound_num, bound_den); }

AdaptiveSession::AdaptiveSession(const OnlineAlgorithm& prototype, InstanceHeader header)
    : algorithm_(prototype.clone()), state_(header.n), ledger_(header.n) {
  if (prototype.required_foresight(header.n) > 0) {
    throw std::invalid_argument("adversaries play against no-foresight algorithms; " + prototype.name() +
                                " needs foresight");
  }
  header.foresight = 0;
  instance_.header = std::move(header);
  validate_header(instance_.header);
  algorithm_->start(instance_.header);
}

AgentId AdaptiveSession::peek(const HighLowMask& mask) const {
  auto probe = algorithm_->clone();
  const GoodEvent good = GoodEvent::two_value(state_.t() + 1, mask);
  return probe->choose(state_, good, {});
}

AgentId AdaptiveSession::emit(const HighLowMask& mask) {
  GoodEvent good = GoodEvent::two_value(state_.t() + 1, mask);
  validate_event(instance_.header, good);
  const AgentId agent = algorithm_->choose(state_, good, {});
  if (agent >= instance_.n()) throw InvariantViolation(algorithm_->name() + " returned an agent out of range");
  instance_.goods.push_back(good);
  state_.assign(instance_.header, instance_.goods.back(), agent);
  ledger_.add(instance_, instance_.goods.back(), agent);
  choices_.push_back(agent);
  reports_.push_back(ledger_.report(state_, instance_));
  return agent;
}

AdversaryTrace AdaptiveSession::finish(std::string kind, const std::string& metric, double bound_num,
                                       double bound_den, std::vector<std::string> notes) const {
  AdversaryTrace tr;
  tr.kind = std::move(kind);
  tr.algorithm = algorithm_->name();
  tr.instance = instance_;
  tr.choices = choices_;
  tr.reports = reports_;
  tr.notes = std::move(notes);
  for (const auto& rep : reports_) {
    for (AgentId i = 0; i < rep.agents.size(); ++i) {
      const Ratio r = metric == "ef1" ? rep.agents[i].ef1 : rep.agents[i].mms.ratio;
      if (!tr.witness || r < tr.witness->ratio) tr.witness = Witness{rep.t, i, metric, r, bound_num, bound_den};
    }
  }
  return tr;
}

namespace {

HighLowMask universal(std::size_t n, bool high) { return HighLowMask(n, high ? 1 : 0); }

HighLowMask only(std::size_t n, AgentId agent) {
  HighLowMask m(n, 0);
  m[agent] = 1;
  return m;
}

}  // namespace

AdversaryTrace ef1_adversary_two_agents(const OnlineAlgorithm& prototype) {
  InstanceHeader h;
  h.n = 2;
  h.agents = {AgentProfile::make(5, 1), AgentProfile::make(5, 1)};
  AdaptiveSession s(prototype, h);
  std::vector<std::string> notes;

  const AgentId a = s.emit(universal(2, false));  // takes the role of "agent 1"
  const AgentId b = 1 - a;
  notes.push_back("first good went to agent " + std::to_string(a + 1));
  if (s.emit(only(2, a)) == a) {
    notes.push_back("same agent took the second good");
  } else if (s.emit(universal(2, false)) == a) {
    notes.push_back("branch: low good back to the first recipient, then a universal high");
    s.emit(universal(2, true));
  } else {
    HighLowMask m(2, 0);
    m[b] = 1;
    if (s.emit(m) == b) {
      notes.push_back("branch: second recipient took its own high good");
    } else {
      notes.push_back("branch: first recipient took the good high for the other, then a universal high");
      s.emit(universal(2, true));
    }
  }
  return s.finish("ef1-2", "ef1", 1.0, 2.0, std::move(notes));
}

AdversaryTrace mms_adversary(const OnlineAlgorithm& prototype, std::size_t n) {
  if (n < 2) throw std::invalid_argument("mms adversary needs n >= 2");
  InstanceHeader h;
  h.n = n;
  h.agents.assign(n, AgentProfile::make(mms_adversary_alpha(n), 1.0));
  AdaptiveSession s(prototype, h);
  std::vector<std::string> notes;
  const double bound_den = 2.0 * static_cast<double>(n) - 1.0;

  // Staircase: each good is high for agents already served and low for the
  // rest; agents are labelled in the order they are served.
  std::vector<AgentId> label_of;  // label (0-based) -> agent
  std::vector<std::uint8_t> served(n, 0);
  bool doubled = false;
  while (s.t() < n) {
    const AgentId y = s.emit(doubled ? universal(n, false) : served);
    if (served[y]) {
      doubled = true;
    } else if (!doubled) {
      served[y] = 1;
      label_of.push_back(y);
    }
  }
  if (doubled) {
    notes.push_back("an agent received two of the first n goods");
    return s.finish("mms", "mms", 1.0, bound_den, std::move(notes));
  }
  std::string labels = "labels by service order:";
  for (AgentId a : label_of) labels += " " + std::to_string(a + 1);
  notes.push_back(labels);

  std::vector<std::uint8_t> got_low(n, 0);
  for (std::size_t k = 0; k + 1 < n; ++k) got_low[s.emit(universal(n, false))] = 1;
  std::size_t k_label = 0;  // 1-based label of the starved agent with the largest label
  for (std::size_t lab = n; lab >= 1; --lab) {
    if (!got_low[label_of[lab - 1]]) {
      k_label = lab;
      break;
    }
  }
  notes.push_back("starved label k = " + std::to_string(k_label) + " (agent " +
                  std::to_string(label_of[k_label - 1] + 1) + ")");

  if (k_label == n) {
    for (std::size_t k = 0; k + 1 < n; ++k) s.emit(universal(n, true));
  } else {
    bool deviated = false;
    for (std::size_t ell = 1; ell <= n - k_label; ++ell) {
      const AgentId target = label_of[n - ell];
      if (s.emit(only(n, target)) != target) {
        notes.push_back("deviation at step " + std::to_string(ell) + " of the targeted highs");
        for (std::size_t k = 0; k < n - ell; ++k) s.emit(universal(n, true));
        deviated = true;
        break;
      }
    }
    if (!deviated) {
      for (std::size_t k = 0; k + 1 < k_label; ++k) s.emit(universal(n, true));
    }
  }
  return s.finish("mms", "mms", 1.0, bound_den, std::move(notes));
}

Instance known_instance_hard(std::size_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("known instance needs n >= 1");
  if (alpha < static_cast<double>(n)) throw std::invalid_argument("known instance needs alpha >= n");
  Instance inst;
  inst.header.n = n;
  inst.header.agents.assign(n, AgentProfile::make(alpha, 1.0));
  inst.header.foresight = 2 * n - 2;
  for (std::size_t k = 0; k < 2 * n - 1; ++k) {
    inst.goods.push_back(GoodEvent::two_value(k + 1, HighLowMask(n, k < n ? 0 : 1)));
  }
  inst.validate();
  return inst;
}

SqrtAlphaCheck sqrt_alpha_bound_check(std::size_t n) {
  SqrtAlphaCheck c;
  c.n = n;
  c.alpha = mms_adversary_alpha(n);
  const double nd = static_cast<double>(n);
  c.tight_ratio = 1.0 / (2.0 * nd - 1.0);
  c.sqrt_ratio = 1.0 / std::sqrt(2.0 * c.alpha);
  c.gap = c.tight_ratio - c.sqrt_ratio;
  c.holds = c.tight_ratio >= c.sqrt_ratio && c.gap <= 1.0 / (nd * nd);
  return c;
}

std::string to_json(const AdversaryTrace& tr) {
  nlohmann::ordered_json doc;
  doc["kind"] = tr.kind;
  doc["algorithm"] = tr.algorithm;
  doc["n"] = tr.instance.n();
  doc["alpha"] = tr.instance.n() ? tr.instance.agent(0).alpha : 0.0;
  doc["beta"] = tr.instance.n() ? tr.instance.agent(0).beta : 0.0;
  auto steps = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < tr.choices.size(); ++k) {
    nlohmann::ordered_json s;
    s["t"] = k + 1;
    auto high = nlohmann::ordered_json::array();
    for (auto b : tr.instance.goods[k].mask()) high.push_back(b != 0);
    s["high"] = high;
    s["allocated_to"] = tr.choices[k] + 1;
    auto ratios = nlohmann::ordered_json::array();
    for (const auto& a : tr.reports[k].agents) {
      ratios.push_back(tr.witness && tr.witness->metric == "ef1" ? a.ef1.value() : a.mms.ratio.value());
    }
    s["ratios"] = ratios;
    steps.push_back(std::move(s));
  }
  doc["steps"] = steps;
  if (tr.witness) {
    const Witness& w = *tr.witness;
    doc["witness"] = {{"t", w.t},
                      {"agent", w.agent + 1},
                      {"metric", w.metric},
                      {"ratio", w.ratio.value()},
                      {"ratio_num", w.ratio.num},
                      {"ratio_den", w.ratio.den},
                      {"bound", format_real(w.bound_num) + "/" + format_real(w.bound_den)},
                      {"certified", w.certified()},
                      {"meets_bound", w.meets_bound()}};
  }
  doc["notes"] = tr.notes;
  return doc.dump(2);
}

}  // namespace ofd
