#include "mecfl/link_model.hpp"

#include <cmath>

namespace mecfl {

BitsPerSecond base_rate(const UserProfile& user, const SystemConfig& cfg) {
  const double snr = user.transmit_power_w * user.channel_gain / cfg.noise_power_w;
  return BitsPerSecond(cfg.bandwidth_hz * std::log2(1.0 + snr));
}

BitsPerSecond offload_rate(const UserProfile& user, const UserAllocation& alloc, const SystemConfig& cfg) {
  return alloc.uplink_offload * base_rate(user, cfg);
}

BitsPerSecond upload_rate(const UserProfile& user, const UserAllocation& alloc, const SystemConfig& cfg) {
  return alloc.uplink_weight * base_rate(user, cfg);
}

LinkRates link_rates(const UserProfile& user, const UserAllocation& alloc, const SystemConfig& cfg) {
  const BitsPerSecond r = base_rate(user, cfg);
  return {r, alloc.uplink_offload * r, alloc.uplink_weight * r};
}

}  // namespace mecfl
