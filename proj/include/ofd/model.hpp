#pragma once

// Core data model: agents, streamed goods, instances, allocation state and the
// online-algorithm contract every allocator in this library implements.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ofd {

using AgentId = std::size_t;  // 0-based internally; 1-based in every file format

/// Raised when an algorithm reaches a state its own invariants rule out.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class AgentType { Type0, Type1, Type2, Type3 };

/// Type1: alpha > beta > 0, Type2: alpha = beta > 0, Type3: alpha > beta = 0,
/// Type0: alpha = beta = 0. Throws std::invalid_argument unless alpha >= beta >= 0.
AgentType classify_agent(double alpha, double beta);
std::string_view to_string(AgentType type);

struct AgentProfile {
  double alpha = 0.0;  // high value
  double beta = 0.0;   // low value
  AgentType kind = AgentType::Type0;

  static AgentProfile make(double alpha, double beta);
};

enum class Flavor { TwoValue, IntervalRestricted };
std::string_view to_string(Flavor flavor);

using HighLowMask = std::vector<std::uint8_t>;
using RealVector = std::vector<double>;

struct GoodEvent {
  std::size_t index = 0;  // arrival time step, 1-based
  std::variant<HighLowMask, RealVector> values;

  std::size_t width() const;
  bool is_mask() const { return std::holds_alternative<HighLowMask>(values); }
  const HighLowMask& mask() const { return std::get<HighLowMask>(values); }
  const RealVector& reals() const { return std::get<RealVector>(values); }

  static GoodEvent two_value(std::size_t index, HighLowMask mask);
  static GoodEvent interval(std::size_t index, RealVector values);
};

struct InstanceHeader {
  std::size_t n = 0;
  std::vector<AgentProfile> agents;
  Flavor flavor = Flavor::TwoValue;
  std::size_t foresight = 0;
};

struct Instance {
  InstanceHeader header;
  std::vector<GoodEvent> goods;

  std::size_t n() const { return header.n; }
  std::size_t m() const { return goods.size(); }
  const AgentProfile& agent(AgentId i) const { return header.agents.at(i); }
  const GoodEvent& good(std::size_t index) const { return goods.at(index - 1); }

  /// Checks every structural invariant; throws std::invalid_argument.
  void validate() const;
};

void validate_header(const InstanceHeader& header);
void validate_event(const InstanceHeader& header, const GoodEvent& event);

/// v_i(g): alpha/beta for masks, the stored entry for real vectors.
double value(const AgentProfile& profile, const GoodEvent& event, AgentId agent);

/// v_i(g) = alpha_i, symbolically for masks (true for every good when alpha = beta).
bool sees_high(const AgentProfile& profile, const GoodEvent& event, AgentId agent);
/// v_i(g) = beta_i, symbolically for masks.
bool sees_low(const AgentProfile& profile, const GoodEvent& event, AgentId agent);

/// Bundles plus per-agent running tallies for the allocated prefix.
class AllocationState {
 public:
  AllocationState() = default;
  explicit AllocationState(std::size_t n);

  std::size_t n() const { return bundles_.size(); }
  std::size_t t() const { return t_; }

  /// Allocates the next good (event.index must equal t() + 1) irrevocably.
  void assign(const InstanceHeader& header, const GoodEvent& event, AgentId agent);

  const std::vector<std::size_t>& bundle(AgentId i) const { return bundles_.at(i); }
  const std::vector<std::vector<std::size_t>>& bundles() const { return bundles_; }
  AgentId owner(std::size_t good_index) const { return owner_.at(good_index - 1); }
  const std::vector<AgentId>& owners() const { return owner_; }

  std::size_t goods_received(AgentId i) const { return goods_received_.at(i); }
  std::size_t high_received(AgentId i) const { return high_received_.at(i); }
  std::size_t high_seen(AgentId i) const { return high_seen_.at(i); }

 private:
  std::size_t t_ = 0;
  std::vector<std::vector<std::size_t>> bundles_;
  std::vector<AgentId> owner_;
  std::vector<std::size_t> goods_received_;
  std::vector<std::size_t> high_received_;
  std::vector<std::size_t> high_seen_;
};

/// Behavioral contract for a deterministic online allocator. choose() is
/// called exactly once per good, in arrival order; `window` holds the
/// foresight preview (possibly shorter than requested near the stream end).
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual std::size_t required_foresight(std::size_t n) const {
    (void)n;
    return 0;
  }
  virtual void start(const InstanceHeader& header) = 0;
  virtual AgentId choose(const AllocationState& state, const GoodEvent& good,
                         std::span<const GoodEvent> window) = 0;
  virtual std::unique_ptr<OnlineAlgorithm> clone() const = 0;

  // Extra trace columns describing the most recent decision, comma-prefixed.
  virtual std::string trace_header() const { return {}; }
  virtual std::string trace_fields() const { return {}; }
};

}  // namespace ofd
