#pragma once

#include <cstddef>
#include <vector>

#include "mecfl/experiment_spec.hpp"
#include "mecfl/orchestrator.hpp"

namespace mecfl {

struct SweepRow {
  double value = 0.0;           // offload fraction or CPU share held by every user
  RoundMetrics final_round;
  double test_accuracy = 0.0;
  double t_local_train_max = 0.0;  // slowest on-device training, seconds
  std::size_t iterations = 0;
};

/// {0, step, 2 step, ..., 1}; the last point is exactly 1.
std::vector<double> sweep_grid(double step);

/// Runs spec.sweep_rounds iterations per grid point with uniform bandwidth.
/// sweep_offload pins delta to each point and gamma to sweep_fixed_gamma;
/// sweep_gamma pins gamma to each nonzero point and delta to
/// sweep_fixed_delta. Points run on a thread pool; rows come back in grid
/// order.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const Population& pop);

/// Options used for a single sweep point, also usable for a matching
/// baseline run.
RunOptions sweep_point_options(const ExperimentSpec& spec, double value);

}  // namespace mecfl
