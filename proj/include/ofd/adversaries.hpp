#pragma once

// Adaptive adversaries that play the lower-bound constructions against any
// no-foresight OnlineAlgorithm, plus the fixed hard instance that defeats
// even full foresight.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ofd/metrics.hpp"
#include "ofd/model.hpp"

namespace ofd {

struct Witness {
  std::size_t t = 0;
  AgentId agent = 0;
  std::string metric;  // "ef1" or "mms"
  Ratio ratio;
  double bound_num = 0.0;  // the claimed ceiling bound_num / bound_den
  double bound_den = 1.0;

  /// ratio <= bound, cross-multiplied.
  bool certified() const;
  /// ratio == bound, cross-multiplied.
  bool meets_bound() const;
};

struct AdversaryTrace {
  std::string kind;
  std::string algorithm;
  Instance instance;
  std::vector<AgentId> choices;
  std::vector<FairnessReport> reports;  // one per step
  std::optional<Witness> witness;       // minimum ratio over all steps and agents
  std::vector<std::string> notes;

  bool success() const { return witness && witness->certified(); }
};

/// Steers a private copy of the algorithm one good at a time.
class AdaptiveSession {
 public:
  AdaptiveSession(const OnlineAlgorithm& prototype, InstanceHeader header);

  /// Who the algorithm would pick for this good, without committing.
  AgentId peek(const HighLowMask& mask) const;
  AgentId emit(const HighLowMask& mask);

  std::size_t t() const { return state_.t(); }
  const AllocationState& state() const { return state_; }
  const Instance& instance() const { return instance_; }

  AdversaryTrace finish(std::string kind, const std::string& metric, double bound_num, double bound_den,
                        std::vector<std::string> notes) const;

 private:
  std::unique_ptr<OnlineAlgorithm> algorithm_;
  Instance instance_;
  AllocationState state_;
  ValuationLedger ledger_;
  std::vector<AgentId> choices_;
  std::vector<FairnessReport> reports_;
};

/// Two agents valuing goods at 5 or 1; some agent's EF1 ratio reaches 1/2 or
/// less within 5 goods.
AdversaryTrace ef1_adversary_two_agents(const OnlineAlgorithm& prototype);

inline double mms_adversary_alpha(std::size_t n) { return 2.0 * n * n + 2.0 * n; }

/// n agents valuing goods at 2n^2+2n or 1; some agent's MMS ratio reaches
/// 1/(2n-1) or less within 3n-1 goods.
AdversaryTrace mms_adversary(const OnlineAlgorithm& prototype, std::size_t n);

/// n universal lows followed by n-1 universal highs, all agents (alpha, 1),
/// foresight covering the whole stream.
Instance known_instance_hard(std::size_t n, double alpha);

struct SqrtAlphaCheck {
  std::size_t n = 0;
  double alpha = 0.0;
  double tight_ratio = 0.0;  // 1/(2n-1)
  double sqrt_ratio = 0.0;   // 1/sqrt(2 alpha) = 1/sqrt(4n^2+4n)
  double gap = 0.0;
  bool holds = false;  // tight_ratio >= sqrt_ratio and gap <= 1/n^2
};

SqrtAlphaCheck sqrt_alpha_bound_check(std::size_t n);

std::string to_json(const AdversaryTrace& trace);

}  // namespace ofd
