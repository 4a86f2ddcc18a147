#pragma once

// Brute-force verification tools. Nothing here calls into the closed-form
// optimizer; objectives are assembled from cost-model evaluations only.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mecfl/model_core.hpp"

namespace mecfl {

using ScalarFn = std::function<double(double)>;
using Predicate = std::function<bool(double)>;

struct GridResult {
  double x = 0.0;
  double fx = 0.0;
};

/// Exhaustive search over `points` equally spaced values of [lo, hi]. Ties go
/// to the smaller x. Throws NoFeasiblePoint, ValidationError for bad ranges.
GridResult grid_minimize(const ScalarFn& f, double lo, double hi, std::size_t points,
                         const Predicate& feasible = {});

/// Bisection until the bracket is no wider than tol. Throws NoSignChange.
double bisect_root(const ScalarFn& g, double lo, double hi, double tol);

/// Central difference of order 1 or 2 with step h.
double finite_diff(const ScalarFn& f, double x, int order, double h);

enum class UplinkObjective {
  // sum_i lambda_offload_i * t_edge_i + lambda_local_i * t_local_i, the
  // Lagrangian of the time-minimisation problem at fixed multipliers
  kMultiplierWeighted,
  // max_i max(t_local_i, t_edge_i)
  kMaxTime,
};

struct SimplexSearchResult {
  std::vector<double> offload;
  std::vector<double> weight;
  double objective = 0.0;
};

/// Exhaustive search over both discretised bandwidth simplices
/// {w >= 0, sum w <= 1} with step `resolution`, holding delta and gamma fixed.
/// Both objectives separate into an offload part and a weight part, so the
/// two simplices are searched independently. Throws InstanceTooLarge for
/// more than three users.
SimplexSearchResult simplex_minimize_uplink(std::span<const UserProfile> users, const AllocationState& alloc,
                                            std::size_t model_dim, const SystemConfig& cfg, double resolution,
                                            UplinkObjective objective);

inline SimplexSearchResult simplex_minimize_maxtime(std::span<const UserProfile> users,
                                                    const AllocationState& alloc, std::size_t model_dim,
                                                    const SystemConfig& cfg, double resolution) {
  return simplex_minimize_uplink(users, alloc, model_dim, cfg, resolution, UplinkObjective::kMaxTime);
}

}  // namespace mecfl
