#pragma once

// Fairness metrics over an allocation prefix: rho-EF/EF1/EF2, rho-PROP and
// rho-MMS (each the largest rho in [0,1] the allocation satisfies), envy
// graphs, and the maximin-share solvers.

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ofd/model.hpp"

namespace ofd {

inline constexpr double kRelTol = 1e-9;

/// 0 when every value in the instance is an integer (exact comparisons),
/// kRelTol otherwise.
double instance_tolerance(const Instance& instance);

/// a > b beyond a relative slack of tol.
inline bool exceeds(double a, double b, double tol) {
  return a - b > tol * std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
}

/// min(1, num/den) kept as a fraction so that integer-valued instances can be
/// compared exactly by cross-multiplication. Zero denominators mean 1.
struct Ratio {
  double num = 1.0;
  double den = 1.0;

  static Ratio of(double num, double den);
  static Ratio one() { return {}; }

  double value() const { return num / den; }
  bool is_one() const { return num >= den; }
  /// this >= p/q, up to a relative slack of rel_tol.
  bool at_least(double p, double q, double rel_tol = 0.0) const;
  /// this == p/q exactly (cross-multiplied).
  bool equals(double p, double q) const { return num * q == p * den; }
  bool operator<(const Ratio& o) const { return num * o.den < o.num * den; }
};

double bundle_value(const Instance& instance, std::span<const std::size_t> bundle, AgentId agent);

/// Largest rho with v_i(A_i) >= rho * v_i(A_j \ S) for some |S| <= k, clamped to
/// [0,1]; 1 when the best denominator is 0. k in {0,1,2}.
Ratio efk_ratio(const AllocationState& state, const Instance& instance, AgentId i, AgentId j, int k);

/// min(1, n v_i(A_i) / v_i(S)) over the allocated prefix S.
Ratio prop_ratio(const AllocationState& state, const Instance& instance, AgentId i);

inline constexpr std::size_t kExhaustiveMmsLimit = 12;

/// Maximin share of `values` for n bundles by exhaustive search (m <= 12).
double mms_exhaustive(std::span<const double> values, std::size_t n);

/// Maximin share of h goods worth alpha and l goods worth beta.
double mms_two_value(std::size_t h, std::size_t l, double alpha, double beta, std::size_t n);

/// Reference form: every weakly decreasing split of the high goods, low goods
/// water-filled onto the lowest-index minimum bundle. Exponential in n; tests only.
double mms_two_value_enumerate(std::size_t h, std::size_t l, double alpha, double beta,
                               std::size_t n);

struct MmsReport {
  bool available = true;  // false: interval instance beyond the exhaustive limit
  double value = 0.0;
  Ratio ratio;
};

MmsReport mms_report(const AllocationState& state, const Instance& instance, AgentId i);

struct EnvyEdge {
  AgentId from = 0;
  AgentId to = 0;
  double magnitude = 0.0;  // v_from(A_to) - v_from(A_from) > 0
};

struct EnvyGraph {
  std::size_t n = 0;
  std::vector<EnvyEdge> edges;

  std::size_t out_degree(AgentId i) const;
  bool has_edge(AgentId from, AgentId to) const;
};

EnvyGraph build_envy_graph(const AllocationState& state, const Instance& instance);

class CycleError : public std::runtime_error {
 public:
  explicit CycleError(std::vector<AgentId> cycle);
  const std::vector<AgentId>& cycle() const { return cycle_; }

 private:
  std::vector<AgentId> cycle_;
};

/// order[k] is the (k+1)-th agent; position[i] is agent i's 0-based rank.
struct TopologicalOrder {
  std::vector<AgentId> order;
  std::vector<std::size_t> position;
};

/// Kahn's algorithm, always emitting the smallest-index source. Throws CycleError.
TopologicalOrder topo_sort(const EnvyGraph& graph);

struct AgentFairness {
  Ratio ef, ef1, ef2, prop;
  MmsReport mms;
  double own_value = 0.0;
  double total_value = 0.0;  // v_i(S)
  std::size_t envy_out_degree = 0;
};

struct FairnessReport {
  std::size_t t = 0;
  std::vector<AgentFairness> agents;

  Ratio min_ef1() const;
};

/// Straight from the bundles; O(n^2 m).
FairnessReport compute_report(const AllocationState& state, const Instance& instance);

/// Incremental cross-valuation table v_i(A_j) with the two most valuable goods
/// of each A_j from i's perspective; yields the same report in O(n^2) per step.
class ValuationLedger {
 public:
  explicit ValuationLedger(std::size_t n = 0);

  void add(const Instance& instance, const GoodEvent& good, AgentId recipient);
  double cross(AgentId i, AgentId j) const { return cell(i, j).total; }
  Ratio efk(AgentId i, AgentId j, int k) const;
  FairnessReport report(const AllocationState& state, const Instance& instance,
                        bool with_mms = true) const;
  EnvyGraph envy_graph() const;

 private:
  struct Cell {
    double total = 0.0;
    double top1 = 0.0;
    double top2 = 0.0;
  };
  const Cell& cell(AgentId i, AgentId j) const { return cells_[i * n_ + j]; }
  Cell& cell(AgentId i, AgentId j) { return cells_[i * n_ + j]; }

  std::size_t n_;
  std::vector<Cell> cells_;
  std::vector<double> seen_;  // v_i(S)
};

/// t,agent,ef,ef1,ef2,prop,mms_value,mms_ratio,envy_out_degree (agent 1-based).
void write_report_header(std::ostream& out);
void write_report_rows(std::ostream& out, const FairnessReport& report);

}  // namespace ofd
