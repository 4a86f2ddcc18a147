#pragma once

// Closed-form best responses of the resource-management game:
//  - each user's CPU share under its per-round energy budget,
//  - each user's offloaded fraction, balancing its local and edge times,
//  - the edge server's two uplink bandwidth splits, proportional to the
//    square root of multiplier-weighted transmission loads,
// plus the multiplier update driven by energy-budget violations.

#include <cstddef>
#include <span>
#include <vector>

#include "mecfl/model_core.hpp"

namespace mecfl {

struct GammaSolution {
  double gamma = 0.0;
  bool budget_exhausted = false;  // transmission energy alone exceeds the budget
  bool interior = false;          // 0 < gamma < 1, energy constraint active
};

/// Largest CPU share whose total energy stays within the user's budget
/// (local time is decreasing and energy increasing in gamma), projected onto
/// [0, 1]. With delta = 1 there is no local training and gamma = 0.
/// Throws DegenerateDivisor for a zero uplink share that must carry data.
GammaSolution solve_gamma(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                          const SystemConfig& cfg);

struct DeltaSolution {
  double delta = 0.0;
  bool interior = false;
};

/// Offloaded fraction of user i that equalises its local time and its edge
/// time, others' fractions held fixed, projected onto [0, 1].
///
/// A zero offload share makes offloading infinitely slow and yields delta = 0.
/// Throws DegenerateDivisor for gamma = 0 or a zero weight-upload share.
DeltaSolution solve_delta(std::size_t i, std::span<const UserProfile> users, const AllocationState& alloc,
                          std::size_t model_dim, const SystemConfig& cfg);

struct UplinkShares {
  std::vector<double> offload;
  std::vector<double> weight;
};

/// Proportional weights sqrt(lambda * bits / R) of each simplex.
std::vector<double> offload_share_weights(std::span<const UserProfile> users, const AllocationState& alloc,
                                          const SystemConfig& cfg);
std::vector<double> weight_share_weights(std::span<const UserProfile> users, const AllocationState& alloc,
                                         std::size_t model_dim, const SystemConfig& cfg);

/// Normalises proportional weights onto the unit simplex. Throws
/// AllZeroWeights when every weight is zero.
std::vector<double> normalize_shares(std::span<const double> weights, Simplex which);

/// Both bandwidth splits; each sums to 1. Users with delta = 0 receive no
/// offload bandwidth. Throws AllZeroWeights (e.g. nobody offloads).
UplinkShares solve_uplink(std::span<const UserProfile> users, const AllocationState& alloc,
                          std::size_t model_dim, const SystemConfig& cfg);

struct Multipliers {
  double offload = 0.5;
  double local = 0.5;
};

/// Raises the offload multiplier by the increment when the user's energy
/// exceeds its budget, keeps it otherwise; the local multiplier is the
/// complement. The offload multiplier is clamped to [floor, 1 - floor].
Multipliers update_multipliers(Joules e_total, Joules budget, double lambda_offload_prev,
                               const SystemConfig& cfg);

}  // namespace mecfl
