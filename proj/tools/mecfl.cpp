// mecfl: run one scenario, a sweep, or the oracle cross-checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mecfl/experiment_spec.hpp"
#include "mecfl/orchestrator.hpp"
#include "mecfl/population.hpp"
#include "mecfl/report.hpp"
#include "mecfl/sweep.hpp"
#include "mecfl/verification.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string scenario;
  std::optional<std::size_t> users;
  std::optional<std::size_t> max_iter;
  std::string trace;
  bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file with dotted keys");
  cmd->add_option("--seed", f.seed, "RNG seed (overrides config and MECFL_SEED)");
  cmd->add_option("--out", f.out, "CSV output path");
  cmd->add_option("--scenario", f.scenario, "proposed|traditional|centralized|sweep_offload|sweep_gamma");
  cmd->add_option("--users", f.users, "number of users");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap");
  cmd->add_option("--trace", f.trace, "JSON-lines allocation trace path");
  cmd->add_flag("--dump-config", f.dump_config, "print the effective config and exit");
}

mecfl::ExperimentSpec resolve(const CommonFlags& f) {
  mecfl::ExperimentSpec spec = f.config.empty() ? mecfl::ExperimentSpec{} : mecfl::load_spec_file(f.config);
  mecfl::apply_environment(spec);
  if (f.seed) spec.system.rng_seed = *f.seed;
  if (!f.out.empty()) spec.output_path = f.out;
  if (!f.scenario.empty()) spec.scenario = mecfl::parse_scenario(f.scenario);
  if (f.users) spec.user_count = *f.users;
  if (f.max_iter) spec.max_iterations = *f.max_iter;
  if (!f.trace.empty()) spec.trace_path = f.trace;
  spec.validate();
  return spec;
}

int run_scenario(mecfl::ExperimentSpec spec) {
  using mecfl::Scenario;
  if (spec.scenario == Scenario::kSweepOffload || spec.scenario == Scenario::kSweepGamma) {
    const mecfl::Population pop = mecfl::synthesize_users(spec);
    const auto rows = mecfl::run_sweep(spec, pop);
    std::ostringstream csv;
    mecfl::write_sweep_csv(csv, rows);
    mecfl::write_file(spec.output_path, csv.str());
    std::printf("%zu sweep rows written to %s\n", rows.size(), spec.output_path.c_str());
    return 0;
  }

  const mecfl::Population pop = mecfl::synthesize_users(spec);
  mecfl::RunOptions opt;
  opt.max_iterations = spec.max_iterations;
  mecfl::ExperimentResult r;
  switch (spec.scenario) {
    case Scenario::kTraditional:
      r = mecfl::run_traditional(pop, spec.system, spec.max_iterations, opt);
      break;
    case Scenario::kCentralized:
      r = mecfl::run_centralized(pop, spec.system, opt);
      break;
    default:
      r = mecfl::run_proposed(pop, spec.system, opt);
      break;
  }

  std::ostringstream csv;
  mecfl::write_iteration_csv(csv, r.trace);
  mecfl::write_file(spec.output_path, csv.str());
  if (!spec.trace_path.empty()) {
    std::ostringstream jsonl;
    mecfl::write_allocation_trace(jsonl, r.allocations);
    mecfl::write_file(spec.trace_path, jsonl.str());
  }
  const mecfl::RoundMetrics& last = r.trace.back();
  std::printf("scenario=%s iterations=%zu converged=%s test_loss=%s t_total=%s s\n",
              mecfl::to_string(spec.scenario), r.iterations_used, r.converged ? "yes" : "no",
              mecfl::format_double(last.test_loss).c_str(), mecfl::format_double(last.t_total.value()).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator of federated learning with edge-assisted data offloading"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one scenario and write per-iteration metrics");
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep the offload fraction or the CPU share");
  add_common(sweep, sweep_flags);

  mecfl::OracleSuiteOptions oracle;
  CLI::App* verify = app.add_subcommand("verify", "check closed-form solutions against brute-force oracles");
  verify->add_option("--seed", oracle.seed, "instance seed");
  verify->add_option("--gamma-grid", oracle.gamma_grid_points, "grid points for the CPU-share search");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *sweep) {
      const CommonFlags& f = *run ? run_flags : sweep_flags;
      mecfl::ExperimentSpec spec = resolve(f);
      if (*sweep && f.scenario.empty() && spec.scenario != mecfl::Scenario::kSweepGamma) {
        spec.scenario = mecfl::Scenario::kSweepOffload;
      }
      if (f.dump_config) {
        std::cout << mecfl::emit_spec(spec);
        return 0;
      }
      return run_scenario(spec);
    }
    bool all = true;
    for (const mecfl::CheckReport& r : mecfl::run_oracle_suite(oracle)) {
      std::printf("%-4s %-24s instances=%zu failures=%zu worst=%.3g %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(),
                  r.instances, r.failures, r.worst, r.detail.c_str());
      all = all && r.passed;
    }
    return all ? 0 : 1;
  } catch (const mecfl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
