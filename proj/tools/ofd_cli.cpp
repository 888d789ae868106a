// Command-line driver. Exit codes: 0 success, 1 bad input or configuration,
// 2 a guarantee check failed (run --assert-guarantees, verify).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ofd/acceptance.hpp"
#include "ofd/adversaries.hpp"
#include "ofd/baselines.hpp"
#include "ofd/deferred_priority.hpp"
#include "ofd/foresight_matching.hpp"
#include "ofd/format.hpp"
#include "ofd/generators.hpp"
#include "ofd/instance_io.hpp"
#include "ofd/reduction.hpp"
#include "ofd/runner.hpp"

namespace {

using namespace ofd;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  std::string kind;
  std::size_t n = 2;
  std::size_t m = 100;
  std::uint64_t seed = 0;
  double bias = -1.0;
  double alpha = 0.0;
  double alpha_max = 25.0;
  std::string mix = "mixed";

  void add_to(CLI::App* cmd, bool kind_required) {
    auto* k = cmd->add_option(kind_required ? "--kind" : "--gen", kind, "generator kind")
                  ->check(CLI::IsMember({"random", "random-2value", "staircase", "prop51", "interval-random"}));
    if (kind_required) k->required();
    cmd->add_option("--n", n, "number of agents")->check(CLI::Range(1, 64));
    cmd->add_option("--m", m, "number of goods (random kinds)");
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--bias", bias, "P(high) per flag; negative draws one per stream");
    cmd->add_option("--alpha", alpha, "high value (staircase, prop51)");
    cmd->add_option("--alpha-max", alpha_max, "upper end for alpha_i (interval-random)");
    cmd->add_option("--mix", mix, "agent mix (random-2value)")->check(CLI::IsMember({"mixed", "type1"}));
  }

  GeneratorSpec spec(std::size_t foresight) const {
    GeneratorSpec s;
    s.kind = kind;
    s.n = n;
    s.m = m;
    s.seed = seed;
    s.bias = bias;
    s.alpha = alpha;
    s.alpha_max = alpha_max;
    s.mix = mix == "type1" ? AgentMix::Type1 : AgentMix::Mixed;
    s.foresight = foresight;
    return s;
  }
};

/// Opens `path` for writing, or returns stdout for "-" / empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::unique_ptr<OnlineAlgorithm> algorithm_or_throw(const std::string& name) {
  try {
    return make_algorithm(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Rejects configurations an algorithm cannot run under.
void gate(const OnlineAlgorithm& alg, const InstanceHeader& header) {
  if (alg.name() == "naive-matching" && header.n != 2) {
    throw ConfigError("naive-matching requires n = 2 (got n = " + std::to_string(header.n) + ")");
  }
  const std::size_t need = alg.required_foresight(header.n);
  if (header.foresight < need) {
    throw ConfigError(alg.name() + " requires foresight >= " + std::to_string(need) + " (instance grants " +
                      std::to_string(header.foresight) + ")");
  }
}

// ---------------------------------------------------------------------------
// run

struct RunOptions {
  std::string alg;
  std::string instance_path;
  GenOptions gen;
  std::optional<std::size_t> foresight;
  std::string granularity = "every";
  std::string report_path = "-";
  std::string trace_path;
  bool assert_guarantees = false;
};

int cmd_run(const RunOptions& o) {
  auto alg = algorithm_or_throw(o.alg);
  Instance inst;
  if (!o.instance_path.empty()) {
    inst = read_instance_file(o.instance_path);
  } else if (!o.gen.kind.empty()) {
    const std::size_t need = o.gen.n >= 1 ? alg->required_foresight(o.gen.n) : 0;
    inst = generate(o.gen.spec(need));
  } else {
    throw ConfigError("give --instance or --gen");
  }
  if (o.foresight) inst.header.foresight = *o.foresight;
  gate(*alg, inst.header);

  Output report(o.report_path);
  write_report_header(report.stream());

  std::optional<StructuralMonitor> structural;
  std::vector<Violation> violations;
  std::optional<NaiveMatchingAudit> naive_audit;
  std::optional<PriorityMatchingAudit> priority_audit;
  if (o.assert_guarantees) {
    if (alg->name() == "deferred-priority") structural.emplace(inst);
    if (alg->name() == "naive-matching") naive_audit.emplace(inst);
    if (alg->name() == "priority-matching") priority_audit.emplace(inst);
  }

  const std::size_t n = inst.n();
  const RunResult result = run_stream(*alg, inst, [&](const StepView& s) {
    const std::size_t t = s.state.t();
    const bool emit = o.granularity == "every" || (o.granularity == "n" && t % n == 0) ||
                      (o.granularity == "final" && t == inst.m());
    if (emit) write_report_rows(report.stream(), s.ledger.report(s.state, inst));
    if (!o.assert_guarantees) return;
    if (structural) {
      const auto& dp = static_cast<const DeferredPriority&>(*alg);
      structural->observe(s.state);
      if (!check_level_sets(dp.state())) violations.push_back({t, "level-set condition fails"});
      for (auto& v : check_share_floors(s.ledger.report(s.state, inst), s.state, inst)) violations.push_back(v);
    }
    if (naive_audit) naive_audit->observe(s, static_cast<const NaiveMatching&>(*alg));
    if (priority_audit) priority_audit->observe(s, static_cast<const PriorityMatching&>(*alg));
  });

  if (!o.trace_path.empty()) {
    Output trace(o.trace_path);
    write_trace(trace.stream(), result);
  }
  if (!o.assert_guarantees) return 0;
  if (structural) violations.insert(violations.begin(), structural->violations().begin(), structural->violations().end());
  if (naive_audit) violations = naive_audit->violations();
  if (priority_audit) violations = priority_audit->violations();
  if (!structural && !naive_audit && !priority_audit) {
    std::cerr << alg->name() << " carries no guarantees to assert\n";
  }
  for (const auto& v : violations) std::cerr << "violation at t=" << v.t << ": " << v.what << "\n";
  return violations.empty() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// adversary

int cmd_adversary(const std::string& kind, const std::string& alg_name, std::size_t n, double alpha,
                  const std::string& out_path, const std::string& instance_out) {
  auto alg = algorithm_or_throw(alg_name);
  AdversaryTrace trace;
  try {
    if (kind == "ef1-2") {
      trace = ef1_adversary_two_agents(*alg);
    } else if (kind == "mms") {
      trace = mms_adversary(*alg, n);
    } else {
      // The fixed hard instance: the algorithm runs with full foresight.
      const Instance inst = known_instance_hard(n, alpha > 0 ? alpha : static_cast<double>(n));
      gate(*alg, inst.header);
      trace.kind = "known";
      trace.algorithm = alg->name();
      trace.instance = inst;
      run_stream(*alg, inst, [&](const StepView& s) {
        trace.choices.push_back(s.agent);
        trace.reports.push_back(s.ledger.report(s.state, inst));
      });
      for (const auto& rep : trace.reports) {
        for (AgentId i = 0; i < rep.agents.size(); ++i) {
          const Ratio r = rep.agents[i].mms.ratio;
          if (!trace.witness || r < trace.witness->ratio) {
            trace.witness = Witness{rep.t, i, "mms", r, 1.0, static_cast<double>(n)};
          }
        }
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Output out(out_path);
  out.stream() << to_json(trace) << "\n";
  if (!instance_out.empty()) write_instance_file(instance_out, trace.instance);
  return 0;
}

// ---------------------------------------------------------------------------
// reduce

int cmd_reduce(const std::string& in, const std::string& out, std::string sidecar) {
  const Instance inst = read_instance_file(in);
  ThresholdProxy p;
  try {
    p = threshold_round(inst);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  write_instance_file(out, p.proxy);
  if (sidecar.empty()) sidecar = std::filesystem::path(out).replace_extension(".thresholds.json").string();
  Output side(sidecar);
  side.stream() << thresholds_json(p) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(bool serial, double scale, int only) {
  AcceptanceOptions options;
  options.parallel = !serial;
  options.scale = scale;
  auto print = [](const CriterionResult& r) {
    std::cout << r.line() << "\n";
    for (const auto& s : r.samples) std::cout << "      " << s << "\n";
    std::cout.flush();
  };
  int failed = 0;
  if (only > 0) {
    const auto r = run_criterion(only, options);
    print(r);
    failed = r.pass ? 0 : 1;
  } else {
    for (const auto& r : run_acceptance(options, print)) failed += r.pass ? 0 : 1;
    std::cout << (kCriterionCount - failed) << " of " << kCriterionCount << " criteria passed\n";
  }
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online fair division of two-value goods: algorithms, adversaries and checks"};
  app.require_subcommand(1);
  std::vector<std::string> algs(algorithm_names().begin(), algorithm_names().end());

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "stream an instance through an algorithm");
  run_cmd->add_option("--alg", run.alg, "algorithm")->required()->check(CLI::IsMember(algs));
  run_cmd->add_option("--instance", run.instance_path, "instance JSONL file");
  run.gen.add_to(run_cmd, false);
  run_cmd->add_option("--foresight", run.foresight, "override the instance's foresight");
  run_cmd->add_option("--granularity", run.granularity, "report rows: every step, multiples of n, or final")
      ->check(CLI::IsMember({"every", "n", "final"}));
  run_cmd->add_option("--report", run.report_path, "fairness report CSV (- for stdout)");
  run_cmd->add_option("--trace", run.trace_path, "allocation trace CSV");
  run_cmd->add_flag("--assert-guarantees", run.assert_guarantees, "exit 2 if the algorithm's guarantees fail");

  GenOptions gen;
  std::size_t gen_foresight = 0;
  std::string gen_out = "-";
  auto* gen_cmd = app.add_subcommand("generate", "write a generated instance as JSONL");
  gen.add_to(gen_cmd, true);
  gen_cmd->add_option("--foresight", gen_foresight, "foresight recorded in the header");
  gen_cmd->add_option("--out", gen_out, "output path (- for stdout)");

  std::string adv_kind, adv_alg, adv_out = "-", adv_instance;
  std::size_t adv_n = 2;
  double adv_alpha = 0.0;
  auto* adv_cmd = app.add_subcommand("adversary", "play a lower-bound construction against an algorithm");
  adv_cmd->add_option("--kind", adv_kind, "construction")->required()->check(CLI::IsMember({"ef1-2", "mms", "known"}));
  adv_cmd->add_option("--alg", adv_alg, "algorithm")->required()->check(CLI::IsMember(algs));
  adv_cmd->add_option("--n", adv_n, "number of agents (mms, known)")->check(CLI::Range(2, 64));
  adv_cmd->add_option("--alpha", adv_alpha, "high value for the known instance (default n)");
  adv_cmd->add_option("--out", adv_out, "trace JSON (- for stdout)");
  adv_cmd->add_option("--instance-out", adv_instance, "replayable instance JSONL");

  std::string red_in, red_out, red_sidecar;
  auto* red_cmd = app.add_subcommand("reduce", "round an interval instance to its two-value proxy");
  red_cmd->add_option("--in", red_in, "interval instance JSONL")->required();
  red_cmd->add_option("--out", red_out, "proxy instance JSONL")->required();
  red_cmd->add_option("--sidecar", red_sidecar, "threshold JSON (default <out>.thresholds.json)");

  bool ver_serial = false;
  double ver_scale = 1.0;
  int ver_only = 0;
  auto* ver_cmd = app.add_subcommand("verify", "run the acceptance suite");
  ver_cmd->add_flag("--serial", ver_serial, "use the serial sweep kernel");
  ver_cmd->add_option("--scale", ver_scale, "fraction of each corpus")->check(CLI::Range(0.0, 1.0));
  ver_cmd->add_option("--only", ver_only, "run one criterion")->check(CLI::Range(1, kCriterionCount));

  std::string table_out = "-";
  auto* table_cmd = app.add_subcommand("pattern-table", "print the two-agent pattern table as JSON");
  table_cmd->add_option("--out", table_out, "output path (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gen_cmd) {
      const Instance inst = generate(gen.spec(gen_foresight));
      Output out(gen_out);
      write_instance(out.stream(), inst);
      return 0;
    }
    if (*adv_cmd) return cmd_adversary(adv_kind, adv_alg, adv_n, adv_alpha, adv_out, adv_instance);
    if (*red_cmd) return cmd_reduce(red_in, red_out, red_sidecar);
    if (*ver_cmd) return cmd_verify(ver_serial, ver_scale, ver_only);
    if (*table_cmd) {
      Output out(table_out);
      out.stream() << pattern_table_json() << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "malformed instance: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
