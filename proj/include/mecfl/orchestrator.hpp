#pragma once

// Alternating training / resource-management loop.
//
// Iteration 1 is the warm-up round: random offload fractions and CPU shares,
// uniform bandwidth, multipliers at 0.5. Every later iteration k
//   1. sweeps users in id order: CPU share from the energy budget, then the
//      offload fraction that balances local and edge time (Gauss-Seidel:
//      later users see earlier users' new fractions),
//   2. offloads, trains locally and uploads weights using the bandwidth
//      split of iteration k-1,
//   3. updates multipliers from the energy each user actually spent and
//      recomputes both bandwidth splits for iteration k+1,
//   4. trains the edge model on the pooled offloaded data and aggregates.
// The loop stops once both the test loss and the round time move by at most
// convergence_tol between consecutive iterations.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mecfl/dataset.hpp"
#include "mecfl/model_core.hpp"

namespace mecfl {

struct Population {
  std::vector<UserProfile> users;
  std::vector<Dataset> user_data;   // user_data[i] belongs to users[i]
  Dataset test_set;
  std::vector<double> distances_m;  // optional; empty when gains were given directly
};

struct RunOptions {
  std::size_t max_iterations = 100;
  std::optional<double> pinned_delta;  // every user offloads this fraction
  std::optional<double> pinned_gamma;  // every user trains at this CPU share
  bool uniform_bandwidth = false;      // keep both splits at 1/I
  bool stop_on_convergence = true;
  bool jacobi_sweep = false;           // users read the previous iterate only
};

struct ExperimentResult {
  std::vector<RoundMetrics> trace;
  std::vector<AllocationState> allocations;  // allocation in force during each iteration
  AllocationState final_allocation = AllocationState::uniform(1, 0.0, 1.0);
  ModelState final_model;
  bool converged = false;
  std::size_t iterations_used = 0;
  std::size_t budget_exhausted_events = 0;  // CPU share fell back to gamma_floor
};

/// Throws IterationFailure wrapping any error raised inside an iteration,
/// ValidationError for inconsistent inputs.
ExperimentResult run_proposed(const Population& pop, const SystemConfig& cfg, const RunOptions& opt = {});

/// Plain federated learning: nothing is offloaded and the edge never trains.
ExperimentResult run_traditional(const Population& pop, const SystemConfig& cfg, std::size_t rounds,
                                 RunOptions opt = {});

/// Everything is offloaded; the aggregate is the edge model.
ExperimentResult run_centralized(const Population& pop, const SystemConfig& cfg, RunOptions opt = {});

/// splitmix64 finaliser over (base, stream, round, user). Seeds every
/// per-round random draw.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t round, std::uint64_t user);

}  // namespace mecfl
