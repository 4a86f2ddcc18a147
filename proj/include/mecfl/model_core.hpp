#pragma once

// Domain types shared by every module: system constants, user profiles, the
// per-round allocation (decision variables plus multipliers), model weights
// and per-round metrics.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mecfl/errors.hpp"
#include "mecfl/units.hpp"

namespace mecfl {

/// Absolute tolerance used whenever a value is compared against a constraint.
inline constexpr double kConstraintTol = 1e-9;

struct SystemConfig {
  double bandwidth_hz = 20e6;          // total uplink bandwidth
  double noise_power_w = 1e-9;
  double edge_cpu_hz = 16e9;
  double cycles_per_byte = 100.0;
  double chip_capacitance = 1e-28;     // effective switched capacitance
  double loss_weight = 1.0;            // scales test loss in the weighted score
  double time_weight = 1.0;            // scales round time in the weighted score
  double convergence_tol = 1e-3;
  double multiplier_increment = 0.05;
  double multiplier_floor = 1e-3;      // multipliers stay in [floor, 1 - floor]
  double gamma_floor = 1e-3;           // CPU share used when the energy budget is exhausted
  double bytes_per_sample = 784.0;
  double bytes_per_weight_element = 4.0;
  int local_epochs = 5;
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
  std::uint64_t rng_seed = 7;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  bool operator==(const SystemConfig&) const = default;
};

struct UserProfile {
  std::size_t id = 0;
  double transmit_power_w = 0.2;
  double channel_gain = 1e-7;
  double cpu_hz = 1.2e9;
  double energy_budget_j = 50.0;       // joules available per communication round
  std::size_t dataset_size = 1;        // samples

  void validate() const;
};

/// One user's decision variables, read out of an AllocationState.
struct UserAllocation {
  double delta = 0.0;           // offloaded fraction of the dataset
  double gamma = 0.0;           // fraction of local CPU used for training
  double uplink_offload = 0.0;  // bandwidth share while offloading data
  double uplink_weight = 0.0;   // bandwidth share while uploading weights
};

/// Raw vectors of an allocation. Anything may be stored here; only
/// validate_allocation turns it into an AllocationState.
struct AllocationVectors {
  std::vector<double> delta;
  std::vector<double> gamma;
  std::vector<double> uplink_offload;
  std::vector<double> uplink_weight;
  std::vector<double> lambda_offload;
  std::vector<double> lambda_local;
};

/// Decision variables of one round. Always satisfies both bandwidth simplices
/// and the unit-box constraints on delta and gamma.
class AllocationState {
 public:
  /// Every user gets share 1/n of both simplices.
  static AllocationState uniform(std::size_t n_users, double delta, double gamma,
                                 double lambda_offload = 0.5);

  std::size_t user_count() const { return v_.delta.size(); }
  UserAllocation user(std::size_t i) const;

  std::span<const double> delta() const { return v_.delta; }
  std::span<const double> gamma() const { return v_.gamma; }
  std::span<const double> uplink_offload() const { return v_.uplink_offload; }
  std::span<const double> uplink_weight() const { return v_.uplink_weight; }
  std::span<const double> lambda_offload() const { return v_.lambda_offload; }
  std::span<const double> lambda_local() const { return v_.lambda_local; }

  const AllocationVectors& vectors() const { return v_; }

  bool operator==(const AllocationState& o) const;

 private:
  friend AllocationState validate_allocation(AllocationVectors v, std::size_t n_users);
  explicit AllocationState(AllocationVectors v) : v_(std::move(v)) {}

  AllocationVectors v_;
};

/// Clamps a finite value to [0, 1]. Throws ValidationError on NaN or infinity.
double project_unit_interval(double x);

/// Checks lengths, ranges and the two simplex sums (tolerance kConstraintTol).
/// Throws OutOfRange, SumExceedsOne or ValidationError (length mismatch).
AllocationState validate_allocation(AllocationVectors v, std::size_t n_users);

struct ModelState {
  std::size_t dim = 0;
  std::vector<std::vector<double>> local_weights;  // one per user
  std::vector<double> edge_weights;
  std::vector<double> global_weights;
  std::vector<std::size_t> dataset_sizes;          // |D_i|
  std::vector<std::size_t> local_trainset_sizes;   // samples kept on device
  std::vector<std::size_t> offload_sizes;          // samples sent to the edge
  std::size_t edge_trainset_size = 0;              // pooled offloaded samples

  /// Dimension agreement and the per-user partition bookkeeping.
  /// Throws InconsistentSizes.
  void check_consistency() const;
};

struct RoundMetrics {
  std::size_t iteration = 0;
  std::vector<Seconds> t_local;
  Seconds t_edge;
  Seconds t_total;
  std::vector<Joules> e_total;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double weighted_score = 0.0;  // loss_weight * test_loss + time_weight * t_total
};

}  // namespace mecfl
