#include "ofd/foresight_matching.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "ofd/assignment.hpp"
#include "ofd/format.hpp"

namespace ofd {

// ---------------------------------------------------------------------------
// Pattern table

std::size_t PairPattern::key() const {
  return (a1_first ? 8u : 0u) | (a1_second ? 4u : 0u) | (a2_first ? 2u : 0u) | (a2_second ? 1u : 0u);
}

std::string PairPattern::label() const {
  auto c = [](bool high) { return high ? 'a' : 'b'; };
  return {c(a1_first), c(a1_second), ';', c(a2_first), c(a2_second)};
}

const std::array<PairRule, 16>& pattern_table() {
  using R = PairRule;
  // Key order: bbbb, bbba, bbab, bbaa, babb, ..., aaaa (agent 1 pair, then agent 2 pair).
  static const std::array<PairRule, 16> table = {
      R::FirstToAgent1,  R::FirstToAgent1, R::SecondToAgent1, R::SecondToAgent1,  // bb;bb bb;ba bb;ab bb;aa
      R::SecondToAgent1, R::ContestedI,    R::SecondToAgent1, R::SecondToAgent1,  // ba;bb ba;ba ba;ab ba;aa
      R::FirstToAgent1,  R::FirstToAgent1, R::ContestedII,    R::FirstToAgent1,   // ab;bb ab;ba ab;ab ab;aa
      R::FirstToAgent1,  R::FirstToAgent1, R::SecondToAgent1, R::FirstToAgent1,   // aa;bb aa;ba aa;ab aa;aa
  };
  return table;
}

PairRule lookup(const PairPattern& p) { return pattern_table()[p.key()]; }

std::string to_string(PairRule r) {
  switch (r) {
    case PairRule::FirstToAgent1: return "agent1-first";
    case PairRule::SecondToAgent1: return "agent1-second";
    case PairRule::ContestedI: return "contested-I";
    case PairRule::ContestedII: return "contested-II";
  }
  return "?";
}

std::string pattern_table_json() {
  nlohmann::ordered_json doc;
  doc["legend"] = "pattern = agent1(g,g');agent2(g,g'), a = high, b = low";
  doc["patterns"] = nlohmann::ordered_json::array();
  for (std::size_t key = 0; key < 16; ++key) {
    PairPattern p{(key & 8) != 0, (key & 4) != 0, (key & 2) != 0, (key & 1) != 0};
    nlohmann::ordered_json e;
    e["pattern"] = p.label();
    const PairRule r = pattern_table()[key];
    e["rule"] = to_string(r);
    if (r == PairRule::FirstToAgent1) {
      e["agent1"] = "g";
      e["agent2"] = "g'";
    } else if (r == PairRule::SecondToAgent1) {
      e["agent1"] = "g'";
      e["agent2"] = "g";
    } else {
      e["contested_high"] = r == PairRule::ContestedI ? "g'" : "g";
    }
    doc["patterns"].push_back(std::move(e));
  }
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Naive-Matching

void NaiveMatching::start(const InstanceHeader& header) {
  if (header.n != 2) throw std::invalid_argument("naive-matching needs exactly 2 agents");
  header_ = header;
  ctr_ = 0;
  commitment_.reset();
  last_pattern_.clear();
}

AgentId NaiveMatching::choose(const AllocationState&, const GoodEvent& good, std::span<const GoodEvent> window) {
  last_pattern_.clear();
  if (good.index % 2 == 0) {
    if (!commitment_ || commitment_->first != good.index) {
      throw InvariantViolation("naive-matching: no commitment for good " + std::to_string(good.index));
    }
    const AgentId agent = commitment_->second;
    commitment_.reset();
    return agent;
  }
  if (window.empty()) {  // unpaired last good
    return ctr_ == 0 ? 0 : 1;
  }
  const GoodEvent& next = window.front();
  const PairPattern p{sees_high(header_.agents[0], good, 0), sees_high(header_.agents[0], next, 0),
                      sees_high(header_.agents[1], good, 1), sees_high(header_.agents[1], next, 1)};
  last_pattern_ = p.label();
  AgentId now = 0;
  switch (lookup(p)) {
    case PairRule::FirstToAgent1: now = 0; break;
    case PairRule::SecondToAgent1: now = 1; break;
    case PairRule::ContestedI:
    case PairRule::ContestedII: {
      ctr_ = (ctr_ + 1) % 2;
      const AgentId winner = ctr_ == 1 ? 0 : 1;
      now = lookup(p) == PairRule::ContestedII ? winner : 1 - winner;
      break;
    }
  }
  commitment_ = std::make_pair(next.index, 1 - now);
  return now;
}

std::unique_ptr<OnlineAlgorithm> NaiveMatching::clone() const { return std::make_unique<NaiveMatching>(*this); }

std::string NaiveMatching::trace_fields() const {
  std::string committed = commitment_ ? std::to_string(commitment_->second + 1) : "";
  return "," + std::to_string(ctr_) + "," + last_pattern_ + "," + committed;
}

NaiveMatchingAudit::NaiveMatchingAudit(const Instance& instance) : instance_(&instance) {}

void NaiveMatchingAudit::observe(const StepView& step, const NaiveMatching& algorithm) {
  const double tol = instance_tolerance(*instance_);
  const std::size_t t = step.state.t();
  const auto& L = step.ledger;
  for (AgentId i = 0; i < 2; ++i) {
    if (!L.efk(i, 1 - i, 2).at_least(1, 1, tol)) violations_.push_back({t, "EF2 fails for agent " + std::to_string(i + 1)});
  }
  if (t % 2 != 0) return;
  for (AgentId i = 0; i < 2; ++i) {
    if (!L.efk(i, 1 - i, 1).at_least(1, 1, tol)) violations_.push_back({t, "EF1 fails for agent " + std::to_string(i + 1)});
  }
  if (step.state.goods_received(0) != step.state.goods_received(1)) violations_.push_back({t, "unequal bundle sizes"});
  const AgentId may_envy = algorithm.ctr() == 0 ? 0 : 1;
  const AgentId other = 1 - may_envy;
  if (exceeds(L.cross(other, may_envy), L.cross(other, other), tol)) {
    violations_.push_back({t, "agent " + std::to_string(other + 1) + " envies against ctr=" + std::to_string(algorithm.ctr())});
  }
  const auto& a = instance_->agent(may_envy);
  if (exceeds(L.cross(may_envy, other) - L.cross(may_envy, may_envy), a.alpha - a.beta, tol)) {
    violations_.push_back({t, "agent " + std::to_string(may_envy + 1) + " envy exceeds alpha - beta"});
  }
}

// ---------------------------------------------------------------------------
// Priority-Matching

AuxWeights aux_weights(const InstanceHeader& header, const TopologicalOrder& order, std::span<const GoodEvent> goods) {
  const std::size_t n = header.n;
  AuxWeights aw;
  aw.w.assign(n, std::vector<BigInt>(goods.size()));
  for (AgentId agent = 0; agent < n; ++agent) {
    const std::size_t rank = order.position.at(agent) + 1;
    BigInt base = 1;
    for (std::size_t k = 0; k < n - rank; ++k) base *= 2 * n + 1;
    for (std::size_t k = 0; k + 1 < rank; ++k) base *= 2 * n;
    for (std::size_t g = 0; g < goods.size(); ++g) {
      aw.w[agent][g] = sees_high(header.agents[agent], goods[g], agent) ? 2 * base : base;
    }
  }
  return aw;
}

AgentId RoundPlan::recipient(std::size_t good_index) const {
  for (AgentId a = 0; a < good_of.size(); ++a) {
    if (good_of[a] == good_index) return a;
  }
  throw InvariantViolation("good " + std::to_string(good_index) + " is not in round " + std::to_string(round));
}

namespace {

// Largest n whose scaled weights, summed over n agents, stay inside int64.
constexpr std::size_t kInt64WeightLimit = 13;

std::vector<std::size_t> solve(const AuxWeights& aw, std::size_t n) {
  if (n <= kInt64WeightLimit) {
    WeightMatrix<std::int64_t> w(aw.w.size());
    for (std::size_t a = 0; a < aw.w.size(); ++a) {
      for (const auto& x : aw.w[a]) w[a].push_back(x.convert_to<std::int64_t>());
    }
    return max_weight_assignment(w).good_of;
  }
  return max_weight_assignment(aw.w).good_of;
}

}  // namespace

RoundPlan priority_round_plan(const EnvyGraph& envy, const InstanceHeader& header, std::span<const GoodEvent> goods,
                              std::size_t round) {
  const std::size_t n = header.n;
  if (goods.empty() || goods.size() > n) throw std::invalid_argument("a round covers 1..n goods");
  RoundPlan plan;
  plan.round = round;
  plan.first_good = goods.front().index;
  TopologicalOrder order;
  try {
    order = topo_sort(envy);
  } catch (const CycleError&) {
    throw InvariantViolation("priority-matching: envy graph is cyclic at round " + std::to_string(round));
  }
  plan.order = order.order;
  plan.weights = aux_weights(header, order, goods);
  const auto matched = solve(plan.weights, n);
  plan.good_of.assign(n, 0);
  for (AgentId a = 0; a < n; ++a) {
    if (matched[a] != kUnmatched) plan.good_of[a] = goods[matched[a]].index;
  }
  return plan;
}

RoundPlan priority_round_plan(const AllocationState& state, const Instance& instance, std::span<const GoodEvent> goods,
                              std::size_t round) {
  return priority_round_plan(build_envy_graph(state, instance), instance.header, goods, round);
}

void PriorityMatching::start(const InstanceHeader& header) {
  profiles_ = Instance{header, {}};
  ledger_ = ValuationLedger(header.n);
  plans_.clear();
}

AgentId PriorityMatching::choose(const AllocationState&, const GoodEvent& good, std::span<const GoodEvent> window) {
  const std::size_t n = profiles_.n();
  if ((good.index - 1) % n == 0) {
    std::vector<GoodEvent> round_goods{good};
    for (std::size_t k = 0; k < window.size() && round_goods.size() < n; ++k) round_goods.push_back(window[k]);
    plans_.push_back(priority_round_plan(ledger_.envy_graph(), profiles_.header, round_goods, (good.index - 1) / n + 1));
  }
  if (plans_.empty()) throw InvariantViolation("priority-matching: no plan for good " + std::to_string(good.index));
  const AgentId agent = plans_.back().recipient(good.index);
  ledger_.add(profiles_, good, agent);
  return agent;
}

std::unique_ptr<OnlineAlgorithm> PriorityMatching::clone() const { return std::make_unique<PriorityMatching>(*this); }

std::string PriorityMatching::trace_fields() const {
  if (plans_.empty()) return ",,,";
  const RoundPlan& p = plans_.back();
  return "," + std::to_string(p.round) + "," + join(p.order, ';', [](AgentId a) { return std::to_string(a + 1); }) +
         "," + join(p.good_of, ';', [](std::size_t g) { return std::to_string(g); });
}

PriorityMatchingAudit::PriorityMatchingAudit(const Instance& instance, bool with_mms)
    : instance_(&instance), with_mms_(with_mms) {}

void PriorityMatchingAudit::observe(const StepView& step, const PriorityMatching& algorithm) {
  const double tol = instance_tolerance(*instance_);
  const std::size_t t = step.state.t();
  const std::size_t n = step.state.n();
  const bool boundary = t % n == 0;
  const FairnessReport rep = step.ledger.report(step.state, step.instance, with_mms_ && boundary);
  auto fail = [&](std::string what) { violations_.push_back({t, std::move(what)}); };

  bool half_ef1 = true;
  for (AgentId i = 0; i < n; ++i) {
    const auto& a = rep.agents[i];
    if (!a.ef2.at_least(1, 1, tol)) fail("EF2 fails for agent " + std::to_string(i + 1));
    if (!a.ef1.at_least(1, 2, tol)) half_ef1 = false;
  }
  if (!half_ef1) {
    ++recovery_triggers_;
    if (!recovery_from_) recovery_from_ = (t + n - 1) / n * n;
  }
  if (recovery_from_ && t >= *recovery_from_ && !half_ef1) {
    fail("1/2-EF1 fails after the recovery point " + std::to_string(*recovery_from_));
  }
  if (!boundary) return;

  for (AgentId i = 0; i < n; ++i) {
    const auto& a = rep.agents[i];
    const std::string who = "agent " + std::to_string(i + 1);
    if (step.state.goods_received(i) != t / n) fail(who + " holds " + std::to_string(step.state.goods_received(i)) + " goods");
    if (!a.ef1.at_least(1, 1, tol)) fail("EF1 fails for " + who);
    if (a.mms.available && !a.mms.ratio.at_least(1, static_cast<double>(n), tol)) fail("1/n-MMS fails for " + who);
  }
  const EnvyGraph graph = step.ledger.envy_graph();
  try {
    (void)topo_sort(graph);
  } catch (const CycleError&) {
    fail("envy graph is cyclic");
  }
  for (const auto& e : graph.edges) {
    const auto& a = instance_->agent(e.from);
    if (exceeds(e.magnitude, a.alpha - a.beta, tol)) {
      fail("envy " + std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) + " exceeds alpha - beta");
    }
  }
  if (algorithm.plans().empty()) return;
  const RoundPlan& plan = algorithm.plans().back();
  for (const auto& e : graph.edges) {
    const std::size_t hi = plan.good_of[e.from], hj = plan.good_of[e.to];
    if (hi == 0 || hj == 0) continue;
    const auto& w = plan.weights.w;
    const std::size_t li = hi - plan.first_good, lj = hj - plan.first_good;
    if (w[e.from][lj] + w[e.to][li] > w[e.from][li] + w[e.to][lj]) {
      fail("swapping along envy edge " + std::to_string(e.from + 1) + "->" + std::to_string(e.to + 1) +
           " would raise the matching weight");
    }
  }
}

std::vector<Violation> check_priority_matching_guarantees(const Instance& instance) {
  PriorityMatching alg;
  PriorityMatchingAudit audit(instance);
  run_stream(alg, instance, [&](const StepView& s) { audit.observe(s, alg); });
  return audit.violations();
}

AsymptoticMonitor::AsymptoticMonitor(const Instance& instance, double lambda, double prop_gap)
    : instance_(&instance), lambda_(lambda), prop_gap_(prop_gap) {}

void AsymptoticMonitor::observe(const StepView& step) {
  const std::size_t n = step.state.n();
  const std::size_t t = step.state.t();
  if (!start_) {
    for (AgentId i = 0; i < n; ++i) {
      if (step.ledger.cross(i, i) < lambda_ * instance_->agent(i).alpha) return;
    }
    start_ = t;
  }
  const FairnessReport rep = step.ledger.report(step.state, step.instance, false);
  for (AgentId i = 0; i < n; ++i) {
    const auto& a = rep.agents[i];
    const std::string who = "agent " + std::to_string(i + 1);
    if (!a.ef.at_least(lambda_, lambda_ + 2, kRelTol)) violations_.push_back({t, who + " EF below lambda/(lambda+2)"});
    if (!a.ef1.at_least(lambda_, lambda_ + 1, kRelTol)) violations_.push_back({t, who + " EF1 below lambda/(lambda+1)"});
    if (!a.prop.at_least(lambda_, lambda_ + prop_gap_, kRelTol)) violations_.push_back({t, who + " PROP below floor"});
  }
}

std::optional<std::vector<Violation>> check_asymptotics(const Instance& instance, const std::string& algorithm_name,
                                                        double lambda) {
  std::unique_ptr<OnlineAlgorithm> alg;
  double gap = 2.0;
  if (algorithm_name == "naive-matching") {
    alg = std::make_unique<NaiveMatching>();
    gap = 1.0;
  } else if (algorithm_name == "priority-matching") {
    alg = std::make_unique<PriorityMatching>();
  } else {
    throw std::invalid_argument("asymptotic floors apply to naive-matching and priority-matching only");
  }
  AsymptoticMonitor monitor(instance, lambda, gap);
  run_stream(*alg, instance, [&](const StepView& s) { monitor.observe(s); });
  if (!monitor.premise_reached()) return std::nullopt;
  return monitor.violations();
}

}  // namespace ofd
