#include "mecfl/resource_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mecfl/cost_model.hpp"
#include "mecfl/link_model.hpp"

namespace mecfl {

GammaSolution solve_gamma(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                          const SystemConfig& cfg) {
  if (a.delta >= 1.0) return {0.0, false, false};

  const double tx_energy =
      offload_energy(user, a, cfg).value() + user.transmit_power_w * weight_upload_time(user, a, model_dim, cfg).value();
  const double headroom = user.energy_budget_j - tx_energy;
  if (headroom < 0.0) return {0.0, true, false};

  const double denom = cfg.chip_capacitance * (1.0 - a.delta) * dataset_bytes(user, cfg) * cfg.cycles_per_byte *
                       user.cpu_hz * user.cpu_hz;
  const double root = std::sqrt(headroom / denom);
  const double gamma = project_unit_interval(root);
  return {gamma, false, gamma > 0.0 && gamma < 1.0};
}

DeltaSolution solve_delta(std::size_t i, std::span<const UserProfile> users, const AllocationState& alloc,
                          std::size_t model_dim, const SystemConfig& cfg) {
  const UserProfile& user = users[i];
  const UserAllocation a = alloc.user(i);
  if (a.uplink_offload <= 0.0) return {0.0, false};
  if (a.gamma <= 0.0) throw DegenerateDivisor("offload balance (gamma = 0) of user " + std::to_string(user.id));

  const double bytes = dataset_bytes(user, cfg);
  const double rate = base_rate(user, cfg).value();
  const double full_offload = kBitsPerByte * bytes / (a.uplink_offload * rate);
  const double full_edge_compute = bytes * cfg.cycles_per_byte / cfg.edge_cpu_hz;
  const double full_local_training = bytes * cfg.cycles_per_byte / (a.gamma * user.cpu_hz);
  const double upload = weight_upload_time(user, a, model_dim, cfg).value();

  double others_cycles = 0.0;
  for (std::size_t j = 0; j < users.size(); ++j) {
    if (j == i) continue;
    others_cycles += alloc.delta()[j] * dataset_bytes(users[j], cfg) * cfg.cycles_per_byte;
  }
  const double others_compute = others_cycles / cfg.edge_cpu_hz;

  const double denom = full_offload + full_edge_compute + full_local_training;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw DegenerateDivisor("offload balance of user " + std::to_string(user.id));
  }
  const double raw = (full_local_training + upload - others_compute) / denom;
  const double delta = project_unit_interval(raw);
  return {delta, delta > 0.0 && delta < 1.0};
}

std::vector<double> offload_share_weights(std::span<const UserProfile> users, const AllocationState& alloc,
                                          const SystemConfig& cfg) {
  std::vector<double> w(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const double bits = kBitsPerByte * alloc.delta()[i] * dataset_bytes(users[i], cfg);
    w[i] = std::sqrt(alloc.lambda_offload()[i] * bits / base_rate(users[i], cfg).value());
  }
  return w;
}

std::vector<double> weight_share_weights(std::span<const UserProfile> users, const AllocationState& alloc,
                                         std::size_t model_dim, const SystemConfig& cfg) {
  std::vector<double> w(users.size());
  const double bits = kBitsPerByte * weight_bytes(model_dim, cfg);
  for (std::size_t i = 0; i < users.size(); ++i) {
    w[i] = std::sqrt(alloc.lambda_local()[i] * bits / base_rate(users[i], cfg).value());
  }
  return w;
}

std::vector<double> normalize_shares(std::span<const double> weights, Simplex which) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(sum > 0.0)) throw AllZeroWeights(which);
  std::vector<double> shares(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) shares[i] = weights[i] / sum;
  return shares;
}

UplinkShares solve_uplink(std::span<const UserProfile> users, const AllocationState& alloc,
                          std::size_t model_dim, const SystemConfig& cfg) {
  return {normalize_shares(offload_share_weights(users, alloc, cfg), Simplex::kOffload),
          normalize_shares(weight_share_weights(users, alloc, model_dim, cfg), Simplex::kWeight)};
}

Multipliers update_multipliers(Joules e_total, Joules budget, double lambda_offload_prev,
                               const SystemConfig& cfg) {
  double lambda = lambda_offload_prev;
  if (e_total.value() > budget.value() + kConstraintTol) lambda += cfg.multiplier_increment;
  lambda = std::clamp(lambda, cfg.multiplier_floor, 1.0 - cfg.multiplier_floor);
  return {lambda, 1.0 - lambda};
}

}  // namespace mecfl
