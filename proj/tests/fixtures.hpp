#pragma once

#include "mecfl/experiment_spec.hpp"
#include "mecfl/orchestrator.hpp"
#include "mecfl/population.hpp"

namespace mecfl::testing {

/// Small population for fast orchestration tests.
inline ExperimentSpec small_spec(std::uint64_t seed = 7) {
  ExperimentSpec spec;
  spec.user_count = 4;
  spec.samples_per_user = 60;
  spec.test_samples = 200;
  spec.synthetic_features = 8;
  spec.synthetic_classes = 3;
  spec.system.rng_seed = seed;
  return spec;
}

/// 10 users with 200 samples each.
inline ExperimentSpec desk_spec(std::uint64_t seed = 7) {
  ExperimentSpec spec;
  spec.system.rng_seed = seed;
  return spec;
}

}  // namespace mecfl::testing
