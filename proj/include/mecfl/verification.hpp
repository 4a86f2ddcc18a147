#pragma once

// Randomised cross-checks of the closed-form best responses against the
// brute-force oracles, and of the cost model's curvature against finite
// differences. Each check returns a report instead of throwing so a caller
// can print every outcome.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mecfl/model_core.hpp"

namespace mecfl {

struct CheckReport {
  std::string name;
  bool passed = false;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest observed error, in the check's own metric
  std::string detail;
};

/// A single user with its allocation, configuration and model size.
struct UserInstance {
  UserProfile user;
  UserAllocation alloc;
  std::size_t model_dim = 0;
  SystemConfig cfg;
};

/// Several users sharing one allocation.
struct GroupInstance {
  std::vector<UserProfile> users;
  AllocationState alloc = AllocationState::uniform(1, 0.0, 1.0);
  std::size_t model_dim = 0;
  SystemConfig cfg;
};

/// Budget drawn so that roughly two thirds of instances have an interior CPU share.
UserInstance random_gamma_instance(std::mt19937_64& rng);

GroupInstance random_group_instance(std::mt19937_64& rng, std::size_t n_users);

/// Closed-form CPU share vs. a constrained grid search over `grid_points`
/// values; interior solutions must also meet the budget to 1e-6 relative.
CheckReport check_gamma_oracle(std::size_t instances, std::size_t grid_points, std::uint64_t seed);

/// Closed-form offload fraction vs. bisection on t_local - t_edge (1e-8);
/// interior solutions must balance the two times to 1e-6 relative.
CheckReport check_delta_oracle(std::size_t instances, std::uint64_t seed);

/// Closed-form bandwidth splits vs. exhaustive multiplier-weighted simplex
/// search on two-user instances (one resolution step), plus simplex
/// exactness (1e-12).
CheckReport check_uplink_oracle(std::size_t instances, double resolution, std::uint64_t seed);

/// Closed-form bandwidth splits vs. exhaustive search minimising the
/// slowest user's round time on two-user instances (one resolution step),
/// plus simplex exactness (1e-12).
CheckReport check_uplink_maxtime(std::size_t instances, double resolution, std::uint64_t seed);

/// Finite-difference curvature (>= -1e-6) and first-derivative signs of
/// total energy in (gamma, offload share, weight share), local time in
/// (gamma, weight share) and per-user edge time in the offload share.
CheckReport check_convexity(std::size_t points, std::uint64_t seed);

struct OracleSuiteOptions {
  std::size_t gamma_instances = 200;
  std::size_t gamma_grid_points = 1'000'000;
  std::size_t delta_instances = 200;
  std::size_t uplink_instances = 50;
  double uplink_resolution = 1e-3;
  std::size_t convexity_points = 1000;
  std::uint64_t seed = 2024;
};

std::vector<CheckReport> run_oracle_suite(const OracleSuiteOptions& opt);

}  // namespace mecfl
