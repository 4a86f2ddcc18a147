#pragma once

// Time and energy accounting for one communication round.
//
// Sizes are bytes: a user's dataset occupies bytes_per_sample * |D_i| and a
// weight vector bytes_per_weight_element * dim. Transmission converts bytes
// to bits (x8) against bit/s rates; CPU terms use cycles_per_byte directly.
//
// A zero divisor (gamma, uplink share) raises DegenerateDivisor unless the
// matching numerator is exactly zero, in which case the term is 0.

#include <cstddef>
#include <span>
#include <vector>

#include "mecfl/model_core.hpp"

namespace mecfl {

inline constexpr double kBitsPerByte = 8.0;

double dataset_bytes(const UserProfile& user, const SystemConfig& cfg);
double weight_bytes(std::size_t model_dim, const SystemConfig& cfg);

Seconds local_training_time(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg);
Seconds weight_upload_time(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                           const SystemConfig& cfg);
Seconds offload_time(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg);

/// Local training plus weight upload.
Seconds local_time(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                   const SystemConfig& cfg);

/// Dynamic CPU energy of local training plus radio energy of the weight upload.
Joules local_energy(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                    const SystemConfig& cfg);
Joules local_compute_energy(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg);

Joules offload_energy(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg);

Joules total_energy(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                    const SystemConfig& cfg);

/// Edge CPU time for the pooled offloaded data (shared by all users).
Seconds edge_compute_time(std::span<const UserProfile> users, const AllocationState& alloc,
                          const SystemConfig& cfg);

/// Slowest offload plus the shared edge compute time.
Seconds edge_time_total(std::span<const UserProfile> users, const AllocationState& alloc,
                        const SystemConfig& cfg);

/// User i's own offload time plus the shared edge compute time.
Seconds edge_time_user(std::size_t i, std::span<const UserProfile> users, const AllocationState& alloc,
                       const SystemConfig& cfg);

/// Synchronous round time: max over every local time and the edge time.
Seconds total_time(std::span<const UserProfile> users, const AllocationState& alloc, std::size_t model_dim,
                   const SystemConfig& cfg);

struct RoundCosts {
  std::vector<Seconds> t_local;
  std::vector<Seconds> t_edge_user;
  std::vector<Joules> e_total;
  Seconds t_edge;
  Seconds t_total;
};

RoundCosts evaluate_round(std::span<const UserProfile> users, const AllocationState& alloc,
                          std::size_t model_dim, const SystemConfig& cfg);

}  // namespace mecfl
