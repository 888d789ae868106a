#include "ofd/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "ofd/adversaries.hpp"
#include "ofd/baselines.hpp"
#include "ofd/deferred_priority.hpp"
#include "ofd/foresight_matching.hpp"
#include "ofd/format.hpp"
#include "ofd/generators.hpp"
#include "ofd/reduction.hpp"
#include "ofd/runner.hpp"

namespace ofd {

std::string CriterionResult::line() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2fs", seconds);
  std::string s = std::string(pass ? "PASS" : "FAIL") + "  criterion " + std::to_string(id) + " " + name + ": " +
                  detail + " [" + buf;
  if (time_limit > 0) {
    std::snprintf(buf, sizeof buf, " / limit %.0fs", time_limit);
    s += buf;
  }
  return s + "]";
}

std::uint64_t corpus_seed(int criterion, std::size_t n, std::size_t index) {
  return static_cast<std::uint64_t>(criterion) * 100'000'000ULL + n * 1'000'000ULL + index;
}

namespace {

constexpr std::size_t kDpStreamLength = 200;
constexpr std::size_t kCorpusPerN = 1000;
constexpr std::size_t kLongStream = 2000;

Instance random_instance(std::size_t n, std::size_t m, std::uint64_t seed, std::size_t foresight) {
  GeneratorSpec spec;
  spec.kind = "random-2value";
  spec.n = n;
  spec.m = m;
  spec.seed = seed;
  spec.foresight = foresight;
  return generate(spec);
}

void append(std::vector<Violation>& out, const std::vector<Violation>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

std::size_t scaled(std::size_t count, double scale) {
  const auto k = static_cast<std::size_t>(std::ceil(static_cast<double>(count) * scale));
  return std::max<std::size_t>(1, std::min(count, k));
}

SweepSummary sweep(const AcceptanceOptions& o, std::size_t count, const StreamTask& task) {
  return o.parallel ? sweep_parallel(count, task) : sweep_serial(count, task);
}

/// Streams for n = 2..6, `per_n` each, concatenated.
SweepSummary sweep_over_n(const AcceptanceOptions& o, std::size_t per_n,
                          const std::function<StreamOutcome(std::size_t n, std::size_t k)>& task) {
  return sweep(o, 5 * per_n, [&](std::size_t idx) { return task(2 + idx / per_n, idx % per_n); });
}

std::string describe(const SweepSummary& s) {
  return std::to_string(s.streams) + " streams, " + std::to_string(s.steps) + " steps, " +
         std::to_string(s.violations) + " violations";
}

CriterionResult from_sweep(int id, std::string name, const SweepSummary& s) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.pass = s.ok() && s.streams > 0;
  r.detail = describe(s);
  r.samples = s.samples;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Per-stream tasks

StreamOutcome dp_structural_stream(std::size_t n, std::uint64_t seed) {
  const Instance inst = random_instance(n, kDpStreamLength, seed, 0);
  StructuralMonitor monitor(inst);
  DeferredPriority dp;
  StreamOutcome out;
  run_stream(dp, inst, [&](const StepView& s) { monitor.observe(s.state); });
  out.steps = inst.m();
  out.violations = monitor.violations();
  return out;
}

StreamOutcome dp_level_set_stream(std::size_t n, std::uint64_t seed) {
  const Instance inst = random_instance(n, kDpStreamLength, seed, 0);
  DeferredPriority dp;
  StreamOutcome out;
  run_stream(dp, inst, [&](const StepView& s) {
    if (!check_level_sets(dp.state())) out.violations.push_back({s.state.t(), "level-set condition fails"});
    for (AgentId i = 0; i < n; ++i) {
      if (dp.state().H[i] < 1) out.violations.push_back({s.state.t(), "H below 1"});
    }
  });
  out.steps = inst.m();
  return out;
}

StreamOutcome dp_share_stream(std::size_t n, std::uint64_t seed) {
  const Instance inst = random_instance(n, kDpStreamLength, seed, 0);
  DeferredPriority dp;
  StreamOutcome out;
  run_stream(dp, inst, [&](const StepView& s) {
    append(out.violations, check_share_floors(s.ledger.report(s.state, inst), s.state, inst));
  });
  out.steps = inst.m();
  return out;
}

StreamOutcome naive_matching_stream(std::uint64_t seed) {
  const Instance inst = random_instance(2, kDpStreamLength, seed, 1);
  NaiveMatching alg;
  NaiveMatchingAudit audit(inst);
  run_stream(alg, inst, [&](const StepView& s) { audit.observe(s, alg); });
  return {inst.m(), audit.violations(), 0};
}

StreamOutcome priority_matching_stream(std::size_t n, std::uint64_t seed) {
  const Instance inst = random_instance(n, 50 * n, seed, n - 1);
  PriorityMatching alg;
  PriorityMatchingAudit audit(inst);
  run_stream(alg, inst, [&](const StepView& s) { audit.observe(s, alg); });
  return {inst.m(), audit.violations(), audit.recovery_triggers()};
}

StreamOutcome reduction_stream(std::uint64_t seed) {
  Rng shape(seed);
  GeneratorSpec spec;
  spec.kind = "interval-random";
  spec.n = 2 + shape.below(3);
  spec.m = spec.n + shape.below(kExhaustiveMmsLimit - spec.n + 1);
  spec.seed = seed;
  spec.alpha_max = 25.0;
  spec.foresight = spec.n - 1;
  const Instance inst = generate(spec);
  const ThresholdProxy p = threshold_round(inst);
  const std::size_t n = inst.n();
  const double factor = transfer_factor(inst);
  StreamOutcome out;
  out.steps = inst.m();

  // Sandwich on random subsets and on every prefix.
  Rng pick(seed ^ 0x9e3779b97f4a7c15ULL);
  for (AgentId i = 0; i < n; ++i) {
    for (int trial = 0; trial < 32; ++trial) {
      std::vector<std::size_t> subset;
      for (std::size_t g = 1; g <= inst.m(); ++g) {
        if (pick.chance(0.5)) subset.push_back(g);
      }
      if (!sandwich_holds(p, i, subset)) out.violations.push_back({0, "sandwich fails on a random subset"});
    }
    for (std::size_t t = 1; t <= inst.m(); ++t) {
      std::vector<std::size_t> prefix;
      for (std::size_t g = 1; g <= t; ++g) prefix.push_back(g);
      if (!sandwich_holds(p, i, prefix)) out.violations.push_back({t, "sandwich fails on a prefix"});
      if (!mms_dominated(p, i, t)) out.violations.push_back({t, "original MMS exceeds proxy MMS"});
    }
  }

  auto lift_each_prefix = [&](const std::vector<AgentId>& allocation, const char* alg,
                              const std::function<void(std::size_t, const FairnessReport&)>& check) {
    for (std::size_t t = 1; t <= allocation.size(); ++t) {
      const LiftResult lr = lift_guarantee(p, std::span(allocation).first(t));
      for (auto v : lr.violations) {
        v.what = std::string(alg) + ": " + v.what;
        out.violations.push_back(std::move(v));
      }
      check(t, lr.original);
    }
  };

  DeferredPriority dp;
  const RunResult dp_run = run_stream(dp, p.proxy);
  const double mms_floor = factor * static_cast<double>(2 * n - 1);
  lift_each_prefix(dp_run.allocation, "deferred-priority", [&](std::size_t t, const FairnessReport& rep) {
    for (AgentId i = 0; i < n; ++i) {
      if (!rep.agents[i].mms.ratio.at_least(1.0, mms_floor, kRelTol)) {
        out.violations.push_back({t, "deferred-priority: original MMS ratio " +
                                         format_real(rep.agents[i].mms.ratio.value()) + " below 1/(a*(2n-1))"});
      }
    }
  });

  PriorityMatching pm;
  const RunResult pm_run = run_stream(pm, p.proxy);
  lift_each_prefix(pm_run.allocation, "priority-matching", [&](std::size_t t, const FairnessReport& rep) {
    for (AgentId i = 0; i < n; ++i) {
      if (!rep.agents[i].ef2.at_least(1.0, factor, kRelTol)) {
        out.violations.push_back({t, "priority-matching: original EF2 below 1/a*"});
      }
      if (t % n == 0 && !rep.agents[i].ef1.at_least(1.0, factor, kRelTol)) {
        out.violations.push_back({t, "priority-matching: original EF1 below 1/a* at a round boundary"});
      }
    }
  });
  return out;
}

StreamOutcome asymptotic_stream(const std::string& algorithm, std::size_t n, std::uint64_t seed) {
  const bool naive = algorithm == "naive-matching";
  const Instance inst = random_instance(n, kLongStream, seed, naive ? 1 : n - 1);
  const double gap = naive ? 1.0 : 2.0;
  std::vector<AsymptoticMonitor> monitors;
  for (double lambda : {1.0, 2.0, 4.0}) monitors.emplace_back(inst, lambda, gap);
  auto alg = make_algorithm(algorithm);
  run_stream(*alg, inst, [&](const StepView& s) {
    for (auto& m : monitors) m.observe(s);
  });
  StreamOutcome out;
  out.steps = inst.m();
  for (std::size_t k = 0; k < monitors.size(); ++k) {
    if (monitors[k].premise_reached()) ++out.events;
    for (auto v : monitors[k].violations()) {
      v.what = "lambda=" + format_real(std::pow(2.0, static_cast<double>(k))) + ": " + v.what;
      out.violations.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criteria

namespace {

CriterionResult criterion_dp_structural(const AcceptanceOptions& o) {
  const auto s = sweep_over_n(o, scaled(kCorpusPerN, o.scale), [](std::size_t n, std::size_t k) {
    return dp_structural_stream(n, corpus_seed(1, n, k));
  });
  auto r = from_sweep(1, "deferred-priority structural guarantees", s);
  r.time_limit = 60;
  return r;
}

CriterionResult criterion_level_sets(const AcceptanceOptions& o) {
  const auto s = sweep_over_n(o, scaled(kCorpusPerN, o.scale), [](std::size_t n, std::size_t k) {
    return dp_level_set_stream(n, corpus_seed(1, n, k));
  });
  return from_sweep(2, "level-set condition", s);
}

CriterionResult criterion_shares(const AcceptanceOptions& o) {
  const auto s = sweep_over_n(o, scaled(kCorpusPerN, o.scale), [](std::size_t n, std::size_t k) {
    return dp_share_stream(n, corpus_seed(1, n, k));
  });
  return from_sweep(3, "deferred-priority MMS and PROP floors", s);
}

CriterionResult criterion_tightness(const AcceptanceOptions&) {
  CriterionResult r;
  r.id = 4;
  r.name = "MMS adversary meets 1/(2n-1) against deferred-priority";
  r.time_limit = 10;
  r.pass = true;
  DeferredPriority dp;
  for (std::size_t n = 2; n <= 5; ++n) {
    const AdversaryTrace tr = mms_adversary(dp, n);
    const bool ok = tr.witness && tr.witness->meets_bound();
    r.pass = r.pass && ok;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += "n=" + std::to_string(n) + ": ";
    if (tr.witness) {
      r.detail += "min " + format_real(tr.witness->ratio.num) + "/" + format_real(tr.witness->ratio.den) + " at t=" +
                  std::to_string(tr.witness->t);
    } else {
      r.detail += "no witness";
    }
  }
  return r;
}

CriterionResult criterion_ef1_adversary(const AcceptanceOptions&) {
  CriterionResult r;
  r.id = 5;
  r.name = "EF1 adversary reaches 1/2 within 5 goods";
  r.pass = true;
  for (const char* name : {"deferred-priority", "round-robin", "greedy-welfare"}) {
    const auto alg = make_algorithm(name);
    const AdversaryTrace tr = ef1_adversary_two_agents(*alg);
    const bool ok = tr.success() && tr.witness->t <= 5 && tr.choices.size() <= 5;
    r.pass = r.pass && ok;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += std::string(name) + ": ";
    r.detail += tr.witness ? format_real(tr.witness->ratio.value()) + " at t=" + std::to_string(tr.witness->t)
                           : "no witness";
  }
  return r;
}

CriterionResult criterion_naive(const AcceptanceOptions& o) {
  const auto s = sweep(o, scaled(kCorpusPerN, o.scale),
                       [](std::size_t k) { return naive_matching_stream(corpus_seed(6, 2, k)); });
  return from_sweep(6, "naive-matching even-step EF1", s);
}

CriterionResult criterion_priority(const AcceptanceOptions& o) {
  const auto s = sweep_over_n(o, scaled(kCorpusPerN, o.scale), [](std::size_t n, std::size_t k) {
    return priority_matching_stream(n, corpus_seed(7, n, k));
  });
  auto r = from_sweep(7, "priority-matching round-boundary EF1", s);
  r.detail += ", " + std::to_string(s.events) + " recovery triggers checked";
  return r;
}

CriterionResult criterion_full_foresight(const AcceptanceOptions&) {
  CriterionResult r;
  r.id = 8;
  r.name = "full foresight cannot beat 1/n-MMS";
  r.pass = true;
  std::size_t runs = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    const Instance inst = known_instance_hard(n, static_cast<double>(n));
    for (const auto& name : algorithm_names()) {
      if (name == "naive-matching" && n != 2) continue;
      const auto alg = make_algorithm(name);
      Ratio worst = Ratio::one();
      run_stream(*alg, inst, [&](const StepView& s) {
        const FairnessReport rep = s.ledger.report(s.state, inst);
        for (const auto& a : rep.agents) worst = std::min(worst, a.mms.ratio);
      });
      ++runs;
      if (!(worst.num * static_cast<double>(n) <= worst.den)) {
        r.pass = false;
        r.samples.push_back(name + " at n=" + std::to_string(n) + ": min mms ratio " + format_real(worst.value()));
      }
    }
  }
  r.detail = std::to_string(runs) + " runs, " + std::to_string(r.samples.size()) + " above 1/n";
  return r;
}

CriterionResult criterion_mms_oracles(const AcceptanceOptions&) {
  CriterionResult r;
  r.id = 9;
  r.name = "two-value MMS equals the exhaustive oracle";
  r.time_limit = 30;
  std::size_t cases = 0;
  const std::pair<double, double> profiles[] = {{5, 1}, {2, 1}, {1, 0}, {1, 1}};
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& [alpha, beta] : profiles) {
      for (std::size_t h = 0; h <= kExhaustiveMmsLimit; ++h) {
        for (std::size_t l = 0; h + l <= kExhaustiveMmsLimit; ++l) {
          std::vector<double> values(h, alpha);
          values.insert(values.end(), l, beta);
          const double fast = mms_two_value(h, l, alpha, beta, n);
          const double reference = mms_two_value_enumerate(h, l, alpha, beta, n);
          const double oracle = mms_exhaustive(values, n);
          ++cases;
          if (fast != oracle || reference != oracle) {
            if (r.samples.size() < kSampleLimit) {
              r.samples.push_back("h=" + std::to_string(h) + " l=" + std::to_string(l) + " n=" + std::to_string(n) +
                                  " (" + format_real(alpha) + "," + format_real(beta) + "): fast " +
                                  format_real(fast) + ", reference " + format_real(reference) + ", exhaustive " +
                                  format_real(oracle));
            }
          }
        }
      }
    }
  }
  r.pass = r.samples.empty();
  r.detail = std::to_string(cases) + " cases, " + std::to_string(r.samples.size()) + " mismatches";
  return r;
}

CriterionResult criterion_reduction(const AcceptanceOptions& o) {
  const auto s =
      sweep(o, scaled(200, o.scale), [](std::size_t k) { return reduction_stream(corpus_seed(10, 0, k)); });
  return from_sweep(10, "reduction transfer", s);
}

CriterionResult criterion_asymptotics(const AcceptanceOptions& o) {
  // Half the corpus on naive-matching (n = 2), half on priority-matching (n = 2..6).
  const std::size_t count = scaled(100, o.scale);
  const auto s = sweep(o, count, [](std::size_t k) {
    if (k % 2 == 0) return asymptotic_stream("naive-matching", 2, corpus_seed(11, 2, k));
    const std::size_t n = 2 + (k / 2) % 5;
    return asymptotic_stream("priority-matching", n, corpus_seed(11, n, k));
  });
  auto r = from_sweep(11, "asymptotic EF/EF1/PROP floors", s);
  r.detail += ", " + std::to_string(s.events) + " of " + std::to_string(3 * s.streams) + " (stream, lambda) premises reached";
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = criterion_dp_structural(options); break;
    case 2: r = criterion_level_sets(options); break;
    case 3: r = criterion_shares(options); break;
    case 4: r = criterion_tightness(options); break;
    case 5: r = criterion_ef1_adversary(options); break;
    case 6: r = criterion_naive(options); break;
    case 7: r = criterion_priority(options); break;
    case 8: r = criterion_full_foresight(options); break;
    case 9: r = criterion_mms_oracles(options); break;
    case 10: r = criterion_reduction(options); break;
    case 11: r = criterion_asymptotics(options); break;
    default: throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.time_limit > 0 && r.seconds >= r.time_limit) {
    r.pass = false;
    r.samples.push_back("runtime over the limit");
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, options));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace ofd
