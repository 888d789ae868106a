#pragma once

// Seeded instance generators. Every generator is a pure function of its spec:
// the same spec yields the same instance, byte for byte once serialised.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ofd/model.hpp"

namespace ofd {

enum class AgentMix {
  Mixed,  // types 1, 2 and 3 drawn uniformly, then a profile within the type
  Type1,  // type-1 profiles only
};

struct GeneratorSpec {
  std::string kind = "random-2value";  // random-2value | staircase | prop51 | interval-random
  std::size_t n = 2;
  std::size_t m = 0;           // ignored by staircase and prop51
  std::uint64_t seed = 0;
  double bias = -1.0;          // P(high); negative draws one bias per stream from [0.1, 0.9]
  AgentMix mix = AgentMix::Mixed;
  double alpha = 0.0;          // staircase / prop51 high value; 0 picks the default
  double alpha_max = 25.0;     // interval-random upper end for alpha_i
  std::size_t foresight = 0;
};

/// Profiles the random corpora draw from, by type.
const std::vector<AgentProfile>& profile_pool(AgentType type);

Instance generate(const GeneratorSpec& spec);

/// Generator kinds in CLI spelling.
std::vector<std::string> generator_kinds();

/// mt19937_64 with a platform-independent unit draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double unit();                          // [0, 1)
  std::size_t below(std::size_t bound);   // [0, bound)
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ofd
