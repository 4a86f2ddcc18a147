#include "mecfl/cost_model.hpp"

#include <algorithm>
#include <string>

#include "mecfl/link_model.hpp"

namespace mecfl {

namespace {

// numerator / divisor, where numerator >= 0. Zero numerator wins over a zero
// divisor.
double safe_ratio(double numerator, double divisor, const char* term, std::size_t user) {
  if (numerator == 0.0) return 0.0;
  if (divisor <= 0.0) throw DegenerateDivisor(std::string(term) + " of user " + std::to_string(user));
  return numerator / divisor;
}

void check_sizes(std::span<const UserProfile> users, const AllocationState& alloc) {
  if (users.size() != alloc.user_count()) {
    throw ValidationError("allocation covers " + std::to_string(alloc.user_count()) + " users, expected " +
                          std::to_string(users.size()));
  }
}

}  // namespace

double dataset_bytes(const UserProfile& user, const SystemConfig& cfg) {
  return cfg.bytes_per_sample * static_cast<double>(user.dataset_size);
}

double weight_bytes(std::size_t model_dim, const SystemConfig& cfg) {
  return cfg.bytes_per_weight_element * static_cast<double>(model_dim);
}

Seconds local_training_time(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg) {
  const double cycles = (1.0 - a.delta) * dataset_bytes(user, cfg) * cfg.cycles_per_byte;
  return Seconds(safe_ratio(cycles, a.gamma * user.cpu_hz, "local training time", user.id));
}

Seconds weight_upload_time(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                           const SystemConfig& cfg) {
  const double bits = kBitsPerByte * weight_bytes(model_dim, cfg);
  return Seconds(safe_ratio(bits, upload_rate(user, a, cfg).value(), "weight upload time", user.id));
}

Seconds offload_time(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg) {
  const double bits = kBitsPerByte * a.delta * dataset_bytes(user, cfg);
  return Seconds(safe_ratio(bits, offload_rate(user, a, cfg).value(), "dataset offload time", user.id));
}

Seconds local_time(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                   const SystemConfig& cfg) {
  return local_training_time(user, a, cfg) + weight_upload_time(user, a, model_dim, cfg);
}

Joules local_compute_energy(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg) {
  const double freq = a.gamma * user.cpu_hz;
  return Joules(cfg.chip_capacitance * (1.0 - a.delta) * dataset_bytes(user, cfg) * cfg.cycles_per_byte *
                freq * freq);
}

Joules local_energy(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                    const SystemConfig& cfg) {
  return local_compute_energy(user, a, cfg) +
         Joules(user.transmit_power_w * weight_upload_time(user, a, model_dim, cfg).value());
}

Joules offload_energy(const UserProfile& user, const UserAllocation& a, const SystemConfig& cfg) {
  return Joules(user.transmit_power_w * offload_time(user, a, cfg).value());
}

Joules total_energy(const UserProfile& user, const UserAllocation& a, std::size_t model_dim,
                    const SystemConfig& cfg) {
  return local_energy(user, a, model_dim, cfg) + offload_energy(user, a, cfg);
}

Seconds edge_compute_time(std::span<const UserProfile> users, const AllocationState& alloc,
                          const SystemConfig& cfg) {
  check_sizes(users, alloc);
  double cycles = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    cycles += alloc.delta()[i] * dataset_bytes(users[i], cfg) * cfg.cycles_per_byte;
  }
  return Seconds(cycles / cfg.edge_cpu_hz);
}

Seconds edge_time_total(std::span<const UserProfile> users, const AllocationState& alloc,
                        const SystemConfig& cfg) {
  const Seconds compute = edge_compute_time(users, alloc, cfg);
  Seconds slowest(0.0);
  for (std::size_t i = 0; i < users.size(); ++i) {
    slowest = std::max(slowest, offload_time(users[i], alloc.user(i), cfg));
  }
  return slowest + compute;
}

Seconds edge_time_user(std::size_t i, std::span<const UserProfile> users, const AllocationState& alloc,
                       const SystemConfig& cfg) {
  return offload_time(users[i], alloc.user(i), cfg) + edge_compute_time(users, alloc, cfg);
}

Seconds total_time(std::span<const UserProfile> users, const AllocationState& alloc, std::size_t model_dim,
                   const SystemConfig& cfg) {
  Seconds t = edge_time_total(users, alloc, cfg);
  for (std::size_t i = 0; i < users.size(); ++i) {
    t = std::max(t, local_time(users[i], alloc.user(i), model_dim, cfg));
  }
  return t;
}

RoundCosts evaluate_round(std::span<const UserProfile> users, const AllocationState& alloc,
                          std::size_t model_dim, const SystemConfig& cfg) {
  check_sizes(users, alloc);
  RoundCosts out;
  const Seconds compute = edge_compute_time(users, alloc, cfg);
  Seconds slowest(0.0);
  Seconds slowest_local(0.0);
  for (std::size_t i = 0; i < users.size(); ++i) {
    const UserAllocation a = alloc.user(i);
    const Seconds off = offload_time(users[i], a, cfg);
    const Seconds loc = local_time(users[i], a, model_dim, cfg);
    out.t_local.push_back(loc);
    out.t_edge_user.push_back(off + compute);
    out.e_total.push_back(total_energy(users[i], a, model_dim, cfg));
    slowest = std::max(slowest, off);
    slowest_local = std::max(slowest_local, loc);
  }
  out.t_edge = slowest + compute;
  out.t_total = std::max(slowest_local, out.t_edge);
  return out;
}

}  // namespace mecfl
