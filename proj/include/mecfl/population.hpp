#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mecfl/dataset.hpp"
#include "mecfl/experiment_spec.hpp"
#include "mecfl/orchestrator.hpp"

namespace mecfl {

/// Gaussian class clusters with unit noise. Class means sit `separation`
/// apart (axis directions when features >= classes, random directions
/// otherwise). Labels cycle
/// through the classes before shuffling. Throws ValidationError for
/// n_samples = 0.
Dataset synthesize_dataset(std::size_t n_samples, std::size_t n_features, std::size_t n_classes,
                           std::uint64_t seed, double separation = 5.0);

/// Shuffles the pool and deals it into `shards` near-equal parts (sizes
/// differ by at most one, larger shards first).
std::vector<Dataset> shard_dataset(const Dataset& pool, std::size_t shards, std::uint64_t seed);

/// d^-3 * 10^(shadowing_db / 10).
double channel_gain_at(double distance_m, double shadowing_db);

/// Users with CPU frequency, energy budget and distance drawn uniformly from
/// the spec's ranges, plus their data shards and a test set. Synthetic data
/// draws users * samples + test samples from one distribution; IDX data
/// shards the training file (samples = 0 takes all of it) and tests on the
/// test file.
Population synthesize_users(const ExperimentSpec& spec);

enum class CellTag { kCenter, kMiddle, kEdge };

/// Bottom distance decile is cell-center, top decile is cell-edge.
std::vector<CellTag> cell_tags(const std::vector<double>& distances_m);

}  // namespace mecfl
