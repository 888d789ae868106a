#include "ofd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>

#include "ofd/format.hpp"

namespace ofd {

double instance_tolerance(const Instance& instance) {
  auto integral = [](double x) { return std::floor(x) == x; };
  for (const auto& a : instance.header.agents) {
    if (!integral(a.alpha) || !integral(a.beta)) return kRelTol;
  }
  for (const auto& g : instance.goods) {
    if (g.is_mask()) continue;
    for (double v : g.reals()) {
      if (!integral(v)) return kRelTol;
    }
  }
  return 0.0;
}

Ratio Ratio::of(double num, double den) {
  if (!(den > 0.0) || num >= den) return one();
  return Ratio{std::max(num, 0.0), den};
}

bool Ratio::at_least(double p, double q, double rel_tol) const {
  const double lhs = num * q;
  const double rhs = p * den;
  return lhs >= rhs - rel_tol * std::max(std::abs(lhs), std::abs(rhs));
}

double bundle_value(const Instance& instance, std::span<const std::size_t> bundle, AgentId agent) {
  double total = 0.0;
  for (std::size_t g : bundle) total += value(instance.agent(agent), instance.good(g), agent);
  return total;
}

Ratio efk_ratio(const AllocationState& state, const Instance& instance, AgentId i, AgentId j, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("efk_ratio supports k in {0,1,2}");
  const double own = bundle_value(instance, state.bundle(i), i);
  // Same arithmetic as the incremental ledger: total minus the k largest.
  double total = 0.0, top1 = 0.0, top2 = 0.0;
  for (std::size_t g : state.bundle(j)) {
    const double v = value(instance.agent(i), instance.good(g), i);
    total += v;
    if (v > top1) {
      top2 = top1;
      top1 = v;
    } else if (v > top2) {
      top2 = v;
    }
  }
  double den = total;
  if (k >= 1) den -= top1;
  if (k >= 2) den -= top2;
  return Ratio::of(own, den);
}

Ratio prop_ratio(const AllocationState& state, const Instance& instance, AgentId i) {
  const double own = bundle_value(instance, state.bundle(i), i);
  double seen = 0.0;
  for (std::size_t g = 1; g <= state.t(); ++g) seen += value(instance.agent(i), instance.good(g), i);
  return Ratio::of(static_cast<double>(state.n()) * own, seen);
}

// ---------------------------------------------------------------------------
// Maximin share

namespace {

struct ExhaustiveSearch {
  std::vector<double> items;  // descending
  std::vector<double> suffix;
  std::vector<double> bins;
  double best = 0.0;

  // Continuous water-fill level reachable from the current bins with `rest` to spread.
  double level_bound(double rest) const {
    std::vector<double> b = bins;
    std::sort(b.begin(), b.end());
    double level = b[0];
    std::size_t k = 1;
    while (true) {
      const double next = k < b.size() ? b[k] : std::numeric_limits<double>::infinity();
      const double need = (next - level) * static_cast<double>(k);
      if (need >= rest) return level + rest / static_cast<double>(k);
      rest -= need;
      level = next;
      ++k;
    }
  }

  void run(std::size_t idx) {
    if (idx == items.size()) {
      best = std::max(best, *std::min_element(bins.begin(), bins.end()));
      return;
    }
    if (level_bound(suffix[idx]) <= best) return;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      bool repeat = false;
      for (std::size_t e = 0; e < b && !repeat; ++e) repeat = bins[e] == bins[b];
      if (repeat) continue;
      bins[b] += items[idx];
      run(idx + 1);
      bins[b] -= items[idx];
    }
  }
};

double pos_floor(double x) { return x <= 0.0 ? 0.0 : std::floor(x); }

bool near_integer(double r) { return std::abs(r - std::round(r)) <= 1e-12 * std::max(1.0, r); }

// Bundles count `units` in multiples of beta; a high good is `ratio` units.
bool feasible_units(std::uint64_t target, std::uint64_t h, std::uint64_t l, std::uint64_t ratio,
                    std::uint64_t n) {
  if (target == 0) return true;
  const std::uint64_t q = (target + ratio - 1) / ratio;
  for (std::uint64_t full = 0; full <= n && full * q <= h; ++full) {
    const std::uint64_t rest = n - full;
    if (rest == 0) return true;
    const std::uint64_t spare = std::min(h - full * q, rest * (q - 1));
    const std::uint64_t need = rest * target;
    const std::uint64_t covered = ratio * spare;
    if (covered >= need || need - covered <= l) return true;
  }
  return false;
}

// Minimum lows needed so that n bundles each reach `target`, using at most h highs.
bool feasible_real(double target, std::size_t h, std::size_t l, double alpha, double beta,
                   std::size_t n) {
  const double slack = 1e-9 * std::max(1.0, target);
  const auto highs_to_fill = static_cast<std::size_t>(std::ceil((target - slack) / alpha));
  const std::size_t q = std::min(highs_to_fill, h);
  auto lows_for = [&](std::size_t a) -> std::size_t {
    const double remaining = target - static_cast<double>(a) * alpha;
    if (remaining <= slack) return 0;
    return static_cast<std::size_t>(std::ceil((remaining - slack) / beta));
  };
  const std::size_t inf = std::numeric_limits<std::size_t>::max() / 2;
  std::vector<std::size_t> cost(h + 1, inf), next(h + 1);
  cost[0] = 0;
  for (std::size_t b = 0; b < n; ++b) {
    std::fill(next.begin(), next.end(), inf);
    for (std::size_t used = 0; used <= h; ++used) {
      if (cost[used] >= inf) continue;
      for (std::size_t a = 0; a <= q && used + a <= h; ++a) {
        next[used + a] = std::min(next[used + a], cost[used] + lows_for(a));
      }
    }
    cost.swap(next);
  }
  return *std::min_element(cost.begin(), cost.end()) <= l;
}

}  // namespace

double mms_exhaustive(std::span<const double> values, std::size_t n) {
  if (n == 0) throw std::invalid_argument("mms needs n >= 1");
  if (values.size() > kExhaustiveMmsLimit) {
    throw std::invalid_argument("mms_exhaustive is limited to " + std::to_string(kExhaustiveMmsLimit) +
                                " goods");
  }
  if (values.size() < n) return 0.0;
  ExhaustiveSearch s;
  s.items.assign(values.begin(), values.end());
  std::sort(s.items.begin(), s.items.end(), std::greater<>());
  s.suffix.assign(s.items.size() + 1, 0.0);
  for (std::size_t k = s.items.size(); k-- > 0;) s.suffix[k] = s.suffix[k + 1] + s.items[k];
  s.bins.assign(n, 0.0);
  s.run(0);
  return s.best;
}

double mms_two_value(std::size_t h, std::size_t l, double alpha, double beta, std::size_t n) {
  if (n == 0) throw std::invalid_argument("mms needs n >= 1");
  if (alpha < beta || beta < 0.0) throw std::invalid_argument("mms needs alpha >= beta >= 0");
  const auto nd = static_cast<double>(n);
  if (alpha == 0.0) return 0.0;
  if (beta == 0.0) return pos_floor(static_cast<double>(h) / nd) * alpha;
  if (alpha == beta) return pos_floor(static_cast<double>(h + l) / nd) * alpha;

  const double r = alpha / beta;
  if (near_integer(r)) {
    const auto ratio = static_cast<std::uint64_t>(std::llround(r));
    std::uint64_t lo = 0, hi = (h * ratio + l) / n;
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo + 1) / 2;
      if (feasible_units(mid, h, l, ratio, n)) lo = mid; else hi = mid - 1;
    }
    // Recompose from the goods so the value matches a bundle sum bit for bit.
    const std::uint64_t highs = std::min<std::uint64_t>(lo / ratio, h);
    return static_cast<double>(highs) * alpha + static_cast<double>(lo - highs * ratio) * beta;
  }

  // Real ratio: the answer is some bundle value a*alpha + b*beta.
  const double cap = (static_cast<double>(h) * alpha + static_cast<double>(l) * beta) / nd;
  std::vector<double> candidates;
  for (std::size_t a = 0; a <= h; ++a) {
    for (std::size_t b = 0; b <= l; ++b) {
      const double v = static_cast<double>(a) * alpha + static_cast<double>(b) * beta;
      if (v > cap * (1 + 1e-12)) break;
      candidates.push_back(v);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (feasible_real(candidates[mid], h, l, alpha, beta, n)) lo = mid; else hi = mid - 1;
  }
  return candidates[lo];
}

double mms_two_value_enumerate(std::size_t h, std::size_t l, double alpha, double beta,
                               std::size_t n) {
  if (n == 0) throw std::invalid_argument("mms needs n >= 1");
  std::vector<std::size_t> split(n, 0);
  double best = 0.0;
  std::function<void(std::size_t, std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                                        std::size_t left,
                                                                        std::size_t cap) {
    if (pos == n) {
      if (left != 0) return;
      std::vector<double> bins(n);
      for (std::size_t b = 0; b < n; ++b) bins[b] = static_cast<double>(split[b]) * alpha;
      for (std::size_t k = 0; k < l; ++k) {
        *std::min_element(bins.begin(), bins.end()) += beta;  // first minimum
      }
      best = std::max(best, *std::min_element(bins.begin(), bins.end()));
      return;
    }
    for (std::size_t c = std::min(cap, left) + 1; c-- > 0;) {
      split[pos] = c;
      rec(pos + 1, left - c, c);
    }
  };
  rec(0, h, h);
  return best;
}

MmsReport mms_report(const AllocationState& state, const Instance& instance, AgentId i) {
  MmsReport r;
  const double own = bundle_value(instance, state.bundle(i), i);
  const auto& a = instance.agent(i);
  if (instance.header.flavor == Flavor::TwoValue) {
    const std::size_t h = state.high_seen(i);
    r.value = mms_two_value(h, state.t() - h, a.alpha, a.beta, state.n());
  } else {
    if (state.t() > kExhaustiveMmsLimit) {
      r.available = false;
      return r;
    }
    std::vector<double> vals;
    for (std::size_t g = 1; g <= state.t(); ++g) vals.push_back(value(a, instance.good(g), i));
    r.value = mms_exhaustive(vals, state.n());
  }
  r.ratio = Ratio::of(own, r.value);
  return r;
}

// ---------------------------------------------------------------------------
// Envy graph

namespace {
bool envies(double own, double other) {
  return other - own > kRelTol * std::max(1.0, std::abs(other));
}
}  // namespace

std::size_t EnvyGraph::out_degree(AgentId i) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [i](const EnvyEdge& e) { return e.from == i; }));
}

bool EnvyGraph::has_edge(AgentId from, AgentId to) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const EnvyEdge& e) { return e.from == from && e.to == to; });
}

EnvyGraph build_envy_graph(const AllocationState& state, const Instance& instance) {
  EnvyGraph g;
  g.n = state.n();
  for (AgentId i = 0; i < g.n; ++i) {
    const double own = bundle_value(instance, state.bundle(i), i);
    for (AgentId j = 0; j < g.n; ++j) {
      if (j == i) continue;
      const double other = bundle_value(instance, state.bundle(j), i);
      if (envies(own, other)) g.edges.push_back({i, j, other - own});
    }
  }
  return g;
}

CycleError::CycleError(std::vector<AgentId> cycle)
    : std::runtime_error("envy graph contains a cycle"), cycle_(std::move(cycle)) {}

TopologicalOrder topo_sort(const EnvyGraph& graph) {
  const std::size_t n = graph.n;
  std::vector<std::vector<AgentId>> out(n), in(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& e : graph.edges) {
    out[e.from].push_back(e.to);
    in[e.to].push_back(e.from);
    ++indeg[e.to];
  }
  std::priority_queue<AgentId, std::vector<AgentId>, std::greater<>> ready;
  for (AgentId v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  TopologicalOrder result;
  result.position.assign(n, n);
  while (!ready.empty()) {
    const AgentId v = ready.top();
    ready.pop();
    result.position[v] = result.order.size();
    result.order.push_back(v);
    for (AgentId w : out[v]) {
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  if (result.order.size() == n) return result;

  // Every leftover vertex keeps a leftover predecessor; walk back until a repeat.
  AgentId v = 0;
  while (result.position[v] != n) ++v;
  std::vector<std::size_t> seen_at(n, n);
  std::vector<AgentId> walk;
  while (seen_at[v] == n) {
    seen_at[v] = walk.size();
    walk.push_back(v);
    for (AgentId p : in[v]) {
      if (result.position[p] == n) {
        v = p;
        break;
      }
    }
  }
  std::vector<AgentId> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[v]), walk.end());
  std::reverse(cycle.begin(), cycle.end());
  throw CycleError(std::move(cycle));
}

// ---------------------------------------------------------------------------
// Reports

Ratio FairnessReport::min_ef1() const {
  Ratio worst;
  for (const auto& a : agents) worst = std::min(worst, a.ef1);
  return worst;
}

FairnessReport compute_report(const AllocationState& state, const Instance& instance) {
  const std::size_t n = state.n();
  FairnessReport rep;
  rep.t = state.t();
  rep.agents.resize(n);
  const EnvyGraph graph = build_envy_graph(state, instance);
  for (AgentId i = 0; i < n; ++i) {
    auto& a = rep.agents[i];
    for (AgentId j = 0; j < n; ++j) {
      if (j == i) continue;
      a.ef = std::min(a.ef, efk_ratio(state, instance, i, j, 0));
      a.ef1 = std::min(a.ef1, efk_ratio(state, instance, i, j, 1));
      a.ef2 = std::min(a.ef2, efk_ratio(state, instance, i, j, 2));
    }
    a.prop = prop_ratio(state, instance, i);
    a.mms = mms_report(state, instance, i);
    a.own_value = bundle_value(instance, state.bundle(i), i);
    for (std::size_t g = 1; g <= state.t(); ++g) a.total_value += value(instance.agent(i), instance.good(g), i);
    a.envy_out_degree = graph.out_degree(i);
  }
  return rep;
}

ValuationLedger::ValuationLedger(std::size_t n) : n_(n), cells_(n * n), seen_(n, 0.0) {}

void ValuationLedger::add(const Instance& instance, const GoodEvent& good, AgentId recipient) {
  for (AgentId i = 0; i < n_; ++i) {
    const double v = value(instance.agent(i), good, i);
    Cell& c = cell(i, recipient);
    c.total += v;
    if (v > c.top1) {
      c.top2 = c.top1;
      c.top1 = v;
    } else if (v > c.top2) {
      c.top2 = v;
    }
    seen_[i] += v;
  }
}

Ratio ValuationLedger::efk(AgentId i, AgentId j, int k) const {
  const Cell& c = cell(i, j);
  double den = c.total;
  if (k >= 1) den -= c.top1;
  if (k >= 2) den -= c.top2;
  return Ratio::of(cell(i, i).total, den);
}

EnvyGraph ValuationLedger::envy_graph() const {
  EnvyGraph g;
  g.n = n_;
  for (AgentId i = 0; i < n_; ++i) {
    for (AgentId j = 0; j < n_; ++j) {
      if (j != i && envies(cross(i, i), cross(i, j))) g.edges.push_back({i, j, cross(i, j) - cross(i, i)});
    }
  }
  return g;
}

FairnessReport ValuationLedger::report(const AllocationState& state, const Instance& instance,
                                       bool with_mms) const {
  FairnessReport rep;
  rep.t = state.t();
  rep.agents.resize(n_);
  for (AgentId i = 0; i < n_; ++i) {
    auto& a = rep.agents[i];
    for (AgentId j = 0; j < n_; ++j) {
      if (j == i) continue;
      a.ef = std::min(a.ef, efk(i, j, 0));
      a.ef1 = std::min(a.ef1, efk(i, j, 1));
      a.ef2 = std::min(a.ef2, efk(i, j, 2));
      if (envies(cross(i, i), cross(i, j))) ++a.envy_out_degree;
    }
    a.own_value = cross(i, i);
    a.total_value = seen_[i];
    a.prop = Ratio::of(static_cast<double>(n_) * a.own_value, seen_[i]);
    if (with_mms) {
      a.mms = mms_report(state, instance, i);
    } else {
      a.mms.available = false;
    }
  }
  return rep;
}

void write_report_header(std::ostream& out) {
  out << "t,agent,ef,ef1,ef2,prop,mms_value,mms_ratio,envy_out_degree\n";
}

void write_report_rows(std::ostream& out, const FairnessReport& report) {
  for (std::size_t i = 0; i < report.agents.size(); ++i) {
    const auto& a = report.agents[i];
    out << report.t << ',' << (i + 1) << ',' << format_real(a.ef.value()) << ','
        << format_real(a.ef1.value()) << ',' << format_real(a.ef2.value()) << ','
        << format_real(a.prop.value()) << ',';
    if (a.mms.available) {
      out << format_real(a.mms.value) << ',' << format_real(a.mms.ratio.value());
    } else {
      out << "NA,NA";
    }
    out << ',' << a.envy_out_degree << '\n';
  }
}

}  // namespace ofd
