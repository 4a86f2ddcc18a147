#include "mecfl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "mecfl/cost_model.hpp"
#include "mecfl/fl_engine.hpp"

namespace mecfl {

std::vector<double> sweep_grid(double step) {
  if (!(step > 0 && step <= 1)) throw ValidationError("sweep step must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  std::vector<double> grid;
  for (std::size_t k = 0; k < n; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(n));
  grid.push_back(1.0);
  return grid;
}

RunOptions sweep_point_options(const ExperimentSpec& spec, double value) {
  RunOptions opt;
  opt.max_iterations = spec.sweep_rounds;
  opt.stop_on_convergence = false;
  opt.uniform_bandwidth = true;
  if (spec.scenario == Scenario::kSweepGamma) {
    opt.pinned_delta = spec.sweep_fixed_delta;
    opt.pinned_gamma = value;
  } else {
    opt.pinned_delta = value;
    opt.pinned_gamma = spec.sweep_fixed_gamma;
  }
  return opt;
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const Population& pop) {
  if (spec.scenario != Scenario::kSweepOffload && spec.scenario != Scenario::kSweepGamma) {
    throw ValidationError("run_sweep needs scenario sweep_offload or sweep_gamma");
  }
  std::vector<double> grid = sweep_grid(spec.sweep_step);
  if (spec.scenario == Scenario::kSweepGamma) grid.erase(grid.begin());

  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  const auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      try {
        const ExperimentResult r = run_proposed(pop, spec.system, sweep_point_options(spec, grid[k]));
        SweepRow& row = rows[k];
        row.value = grid[k];
        row.final_round = r.trace.back();
        row.iterations = r.iterations_used;
        row.test_accuracy = accuracy(r.final_model.global_weights, pop.test_set);
        const AllocationState& used = r.allocations.back();
        for (std::size_t i = 0; i < pop.users.size(); ++i) {
          row.t_local_train_max = std::max(
              row.t_local_train_max, local_training_time(pop.users[i], used.user(i), spec.system).value());
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::size_t n_threads = spec.threads == 0 ? std::thread::hardware_concurrency() : spec.threads;
  n_threads = std::clamp<std::size_t>(n_threads, 1, grid.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace mecfl
