#pragma once

// OFDMA uplink rates. Dataset offloading and weight upload use disjoint
// bandwidth shares and never overlap in time, so rates are independent.

#include "mecfl/model_core.hpp"

namespace mecfl {

struct LinkRates {
  BitsPerSecond base_rate;    // full-band Shannon rate
  BitsPerSecond offload_rate;
  BitsPerSecond upload_rate;
};

/// bandwidth * log2(1 + p g / n0).
BitsPerSecond base_rate(const UserProfile& user, const SystemConfig& cfg);

BitsPerSecond offload_rate(const UserProfile& user, const UserAllocation& alloc, const SystemConfig& cfg);
BitsPerSecond upload_rate(const UserProfile& user, const UserAllocation& alloc, const SystemConfig& cfg);

LinkRates link_rates(const UserProfile& user, const UserAllocation& alloc, const SystemConfig& cfg);

}  // namespace mecfl
