#include "mecfl/model_core.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace mecfl {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(std::string("invalid configuration: ") + what);
}

}  // namespace

void SystemConfig::validate() const {
  require(bandwidth_hz > 0, "bandwidth_hz must be positive");
  require(noise_power_w > 0, "noise_power_w must be positive");
  require(edge_cpu_hz > 0, "edge_cpu_hz must be positive");
  require(cycles_per_byte > 0, "cycles_per_byte must be positive");
  require(chip_capacitance > 0, "chip_capacitance must be positive");
  require(convergence_tol > 0, "convergence_tol must be positive");
  require(multiplier_increment > 0, "multiplier_increment must be positive");
  require(multiplier_floor > 0 && multiplier_floor < 0.5, "multiplier_floor must lie in (0, 0.5)");
  require(gamma_floor > 0 && gamma_floor <= 1, "gamma_floor must lie in (0, 1]");
  require(bytes_per_sample > 0, "bytes_per_sample must be positive");
  require(bytes_per_weight_element > 0, "bytes_per_weight_element must be positive");
  require(local_epochs >= 0, "local_epochs must be non-negative");
  require(learning_rate > 0, "learning_rate must be positive");
  require(batch_size >= 1, "batch_size must be at least 1");
}

void UserProfile::validate() const {
  const std::string who = "user " + std::to_string(id) + ": ";
  if (!(transmit_power_w > 0)) throw ValidationError(who + "transmit_power_w must be positive");
  if (!(channel_gain > 0)) throw ValidationError(who + "channel_gain must be positive");
  if (!(cpu_hz > 0)) throw ValidationError(who + "cpu_hz must be positive");
  if (!(energy_budget_j > 0)) throw ValidationError(who + "energy_budget_j must be positive");
  if (dataset_size < 1) throw ValidationError(who + "dataset_size must be at least 1");
}

double project_unit_interval(double x) {
  if (!std::isfinite(x)) throw ValidationError("project_unit_interval: non-finite input");
  return std::max(std::min(x, 1.0), 0.0);
}

AllocationState AllocationState::uniform(std::size_t n_users, double delta, double gamma,
                                         double lambda_offload) {
  if (n_users == 0) throw ValidationError("allocation needs at least one user");
  const double share = 1.0 / static_cast<double>(n_users);
  AllocationVectors v;
  v.delta.assign(n_users, delta);
  v.gamma.assign(n_users, gamma);
  v.uplink_offload.assign(n_users, share);
  v.uplink_weight.assign(n_users, share);
  v.lambda_offload.assign(n_users, lambda_offload);
  v.lambda_local.assign(n_users, 1.0 - lambda_offload);
  return validate_allocation(std::move(v), n_users);
}

UserAllocation AllocationState::user(std::size_t i) const {
  return {v_.delta.at(i), v_.gamma.at(i), v_.uplink_offload.at(i), v_.uplink_weight.at(i)};
}

bool AllocationState::operator==(const AllocationState& o) const {
  return v_.delta == o.v_.delta && v_.gamma == o.v_.gamma &&
         v_.uplink_offload == o.v_.uplink_offload && v_.uplink_weight == o.v_.uplink_weight &&
         v_.lambda_offload == o.v_.lambda_offload && v_.lambda_local == o.v_.lambda_local;
}

AllocationState validate_allocation(AllocationVectors v, std::size_t n_users) {
  const auto check_len = [n_users](const std::vector<double>& x, const char* name) {
    if (x.size() != n_users) {
      throw ValidationError(std::string(name) + " has " + std::to_string(x.size()) +
                            " entries, expected " + std::to_string(n_users));
    }
  };
  check_len(v.delta, "delta");
  check_len(v.gamma, "gamma");
  check_len(v.uplink_offload, "uplink_offload");
  check_len(v.uplink_weight, "uplink_weight");
  check_len(v.lambda_offload, "lambda_offload");
  check_len(v.lambda_local, "lambda_local");

  const auto check_box = [](const std::vector<double>& x, const char* name, double hi) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || x[i] < -kConstraintTol || x[i] > hi + kConstraintTol) {
        throw OutOfRange(i, name, x[i]);
      }
    }
  };
  check_box(v.delta, "delta", 1.0);
  check_box(v.gamma, "gamma", 1.0);
  check_box(v.uplink_offload, "uplink_offload", 1.0);
  check_box(v.uplink_weight, "uplink_weight", 1.0);
  check_box(v.lambda_offload, "lambda_offload", HUGE_VAL);
  check_box(v.lambda_local, "lambda_local", HUGE_VAL);

  const double off = std::accumulate(v.uplink_offload.begin(), v.uplink_offload.end(), 0.0);
  if (off > 1.0 + kConstraintTol) throw SumExceedsOne(Simplex::kOffload, off - 1.0);
  const double wgt = std::accumulate(v.uplink_weight.begin(), v.uplink_weight.end(), 0.0);
  if (wgt > 1.0 + kConstraintTol) throw SumExceedsOne(Simplex::kWeight, wgt - 1.0);

  return AllocationState(std::move(v));
}

void ModelState::check_consistency() const {
  const auto fail = [](const std::string& m) { throw InconsistentSizes(m); };
  const std::size_t n = dataset_sizes.size();
  if (local_weights.size() != n || local_trainset_sizes.size() != n || offload_sizes.size() != n) {
    fail("per-user vectors disagree in length");
  }
  if (edge_weights.size() != dim || global_weights.size() != dim) {
    fail("edge/global weights do not match model dimension");
  }
  std::size_t offloaded = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (local_weights[i].size() != dim) fail("local weights of user " + std::to_string(i) + " have wrong dimension");
    if (local_trainset_sizes[i] + offload_sizes[i] != dataset_sizes[i]) {
      fail("user " + std::to_string(i) + ": local + offloaded samples != dataset size");
    }
    offloaded += offload_sizes[i];
  }
  if (offloaded != edge_trainset_size) fail("edge training set size != total offloaded samples");
}

}  // namespace mecfl
