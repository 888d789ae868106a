#include "ofd/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "ofd/adversaries.hpp"

namespace ofd {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  return static_cast<std::size_t>(engine_() % bound);
}

const std::vector<AgentProfile>& profile_pool(AgentType type) {
  static const std::vector<AgentProfile> type1 = {AgentProfile::make(5, 1), AgentProfile::make(2, 1),
                                                  AgentProfile::make(3, 1)};
  static const std::vector<AgentProfile> type2 = {AgentProfile::make(1, 1), AgentProfile::make(3, 3)};
  static const std::vector<AgentProfile> type3 = {AgentProfile::make(1, 0), AgentProfile::make(4, 0)};
  switch (type) {
    case AgentType::Type1: return type1;
    case AgentType::Type2: return type2;
    case AgentType::Type3: return type3;
    default: throw std::invalid_argument("no profile pool for type 0");
  }
}

std::vector<std::string> generator_kinds() { return {"random-2value", "staircase", "prop51", "interval-random"}; }

namespace {

Instance random_two_value(const GeneratorSpec& spec) {
  Rng rng(spec.seed);
  Instance inst;
  inst.header.n = spec.n;
  inst.header.foresight = spec.foresight;
  for (std::size_t i = 0; i < spec.n; ++i) {
    AgentType type = AgentType::Type1;
    if (spec.mix == AgentMix::Mixed) {
      static constexpr AgentType kTypes[] = {AgentType::Type1, AgentType::Type2, AgentType::Type3};
      type = kTypes[rng.below(3)];
    }
    const auto& pool = profile_pool(type);
    inst.header.agents.push_back(pool[rng.below(pool.size())]);
  }
  const double bias = spec.bias < 0 ? 0.1 + 0.8 * rng.unit() : spec.bias;
  if (bias > 1.0) throw std::invalid_argument("bias must lie in [0, 1]");
  for (std::size_t t = 1; t <= spec.m; ++t) {
    HighLowMask mask(spec.n);
    for (auto& b : mask) b = rng.chance(bias) ? 1 : 0;
    inst.goods.push_back(GoodEvent::two_value(t, std::move(mask)));
  }
  return inst;
}

Instance staircase(const GeneratorSpec& spec) {
  const double alpha = spec.alpha > 0 ? spec.alpha : mms_adversary_alpha(spec.n);
  Instance inst;
  inst.header.n = spec.n;
  inst.header.foresight = spec.foresight;
  inst.header.agents.assign(spec.n, AgentProfile::make(alpha, 1.0));
  for (std::size_t r = 1; r <= spec.n; ++r) {
    HighLowMask mask(spec.n);
    for (std::size_t i = 1; i <= spec.n; ++i) mask[i - 1] = r <= i ? 0 : 1;
    inst.goods.push_back(GoodEvent::two_value(r, std::move(mask)));
  }
  return inst;
}

Instance interval_random(const GeneratorSpec& spec) {
  if (spec.alpha_max <= 1.0) throw std::invalid_argument("alpha_max must exceed 1");
  Rng rng(spec.seed);
  Instance inst;
  inst.header.n = spec.n;
  inst.header.flavor = Flavor::IntervalRestricted;
  inst.header.foresight = spec.foresight;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double alpha = 1.0 + (spec.alpha_max - 1.0) * (1.0 - rng.unit());  // (1, alpha_max]
    inst.header.agents.push_back(AgentProfile::make(alpha, 1.0));
  }
  for (std::size_t t = 1; t <= spec.m; ++t) {
    RealVector v(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const double alpha = inst.header.agents[i].alpha;
      // Occasionally land exactly on an endpoint or the rounding threshold.
      if (rng.chance(0.1)) {
        const double edges[] = {1.0, std::sqrt(alpha), alpha};
        v[i] = edges[rng.below(3)];
      } else {
        v[i] = 1.0 + (alpha - 1.0) * rng.unit();
      }
    }
    inst.goods.push_back(GoodEvent::interval(t, std::move(v)));
  }
  return inst;
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("n must be at least 1");
  Instance inst;
  if (spec.kind == "random-2value" || spec.kind == "random") {
    inst = random_two_value(spec);
  } else if (spec.kind == "staircase") {
    inst = staircase(spec);
  } else if (spec.kind == "prop51") {
    inst = known_instance_hard(spec.n, spec.alpha > 0 ? spec.alpha : static_cast<double>(spec.n));
    if (spec.foresight > inst.header.foresight) inst.header.foresight = spec.foresight;
  } else if (spec.kind == "interval-random") {
    inst = interval_random(spec);
  } else {
    throw std::invalid_argument("unknown generator kind: " + spec.kind);
  }
  inst.validate();
  return inst;
}

}  // namespace ofd
