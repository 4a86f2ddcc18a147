#include "mecfl/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mecfl/errors.hpp"
#include "mecfl/idx.hpp"

namespace mecfl {

namespace {

enum Stream : std::uint64_t { kUsers = 11, kPool = 12, kShard = 13, kTest = 14 };

std::vector<std::vector<double>> class_means(std::size_t n_features, std::size_t n_classes, double separation,
                                             std::mt19937_64& rng) {
  const double radius = separation * std::sqrt(0.5);
  std::vector<std::vector<double>> means(n_classes, std::vector<double>(n_features, 0.0));
  if (n_features >= n_classes) {
    for (std::size_t c = 0; c < n_classes; ++c) means[c][c] = radius;
    return means;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& m : means) {
    double norm = 0.0;
    for (double& v : m) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : m) v *= radius / norm;
  }
  return means;
}

}  // namespace

Dataset synthesize_dataset(std::size_t n_samples, std::size_t n_features, std::size_t n_classes,
                           std::uint64_t seed, double separation) {
  if (n_samples == 0) throw ValidationError("synthesize_dataset: n_samples must be positive");
  if (n_features == 0 || n_classes < 2) throw ValidationError("synthesize_dataset: need features and two classes");
  if (!(separation > 0)) throw ValidationError("synthesize_dataset: separation must be positive");

  std::mt19937_64 rng(seed);
  const auto means = class_means(n_features, n_classes, separation, rng);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<int> labels(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) labels[k] = static_cast<int>(k % n_classes);
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<double> features(n_samples * n_features);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto& mu = means[static_cast<std::size_t>(labels[k])];
    for (std::size_t f = 0; f < n_features; ++f) features[k * n_features + f] = mu[f] + noise(rng);
  }
  return Dataset(std::move(features), std::move(labels), n_features, n_classes);
}

std::vector<Dataset> shard_dataset(const Dataset& pool, std::size_t shards, std::uint64_t seed) {
  if (shards == 0) throw ValidationError("shard_dataset: need at least one shard");
  if (pool.sample_count() < shards) throw ValidationError("shard_dataset: fewer samples than shards");
  std::vector<std::size_t> order(pool.sample_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Dataset> out;
  const std::size_t base = pool.sample_count() / shards;
  const std::size_t extra = pool.sample_count() % shards;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t len = base + (s < extra ? 1 : 0);
    out.push_back(pool.subset(std::span<const std::size_t>(order).subspan(begin, len)));
    begin += len;
  }
  return out;
}

double channel_gain_at(double distance_m, double shadowing_db) {
  if (!(distance_m > 0)) throw ValidationError("channel_gain_at: distance must be positive");
  return std::pow(distance_m, -3.0) * std::pow(10.0, shadowing_db / 10.0);
}

Population synthesize_users(const ExperimentSpec& spec) {
  spec.validate();
  const std::uint64_t seed = spec.seed();
  Population pop;

  if (spec.data_source == DataSource::kSynthetic) {
    const std::size_t n_train = spec.user_count * spec.samples_per_user;
    const Dataset all = synthesize_dataset(n_train + spec.test_samples, spec.synthetic_features,
                                           spec.synthetic_classes, derive_seed(seed, kPool, 0, 0),
                                           spec.synthetic_separation);
    std::vector<std::size_t> train_rows(n_train);
    std::iota(train_rows.begin(), train_rows.end(), std::size_t{0});
    std::vector<std::size_t> test_rows(spec.test_samples);
    std::iota(test_rows.begin(), test_rows.end(), n_train);
    pop.user_data = shard_dataset(all.subset(train_rows), spec.user_count, derive_seed(seed, kShard, 0, 0));
    pop.test_set = all.subset(test_rows);
  } else {
    Dataset train = load_idx(spec.idx_train_images, spec.idx_train_labels);
    if (spec.samples_per_user > 0) {
      const std::size_t want = spec.user_count * spec.samples_per_user;
      if (want > train.sample_count()) {
        throw ValidationError("IDX training file has fewer samples than users.count * users.samples");
      }
      std::vector<std::size_t> rows(train.sample_count());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      std::mt19937_64 rng(derive_seed(seed, kPool, 0, 0));
      std::shuffle(rows.begin(), rows.end(), rng);
      rows.resize(want);
      train = train.subset(rows);
    }
    pop.user_data = shard_dataset(train, spec.user_count, derive_seed(seed, kShard, 0, 0));
    pop.test_set = load_idx(spec.idx_test_images, spec.idx_test_labels);
  }

  std::mt19937_64 rng(derive_seed(seed, kUsers, 0, 0));
  std::uniform_real_distribution<double> cpu(spec.cpu_hz_range.lo, spec.cpu_hz_range.hi);
  std::uniform_real_distribution<double> budget(spec.energy_budget_range.lo, spec.energy_budget_range.hi);
  std::uniform_real_distribution<double> distance(spec.distance_range_m.lo, spec.distance_range_m.hi);
  std::normal_distribution<double> shadowing(0.0, 1.0);
  for (std::size_t i = 0; i < spec.user_count; ++i) {
    UserProfile u;
    u.id = i;
    u.transmit_power_w = spec.transmit_power_w;
    u.cpu_hz = cpu(rng);
    u.energy_budget_j = budget(rng);
    const double d = distance(rng);
    u.channel_gain = channel_gain_at(d, spec.shadowing_std_db * shadowing(rng));
    u.dataset_size = pop.user_data[i].sample_count();
    pop.users.push_back(u);
    pop.distances_m.push_back(d);
  }
  return pop;
}

std::vector<CellTag> cell_tags(const std::vector<double>& distances_m) {
  std::vector<CellTag> tags(distances_m.size(), CellTag::kMiddle);
  if (distances_m.empty()) return tags;
  std::vector<double> sorted = distances_m;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&sorted](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double near = quantile(0.1);
  const double far = quantile(0.9);
  for (std::size_t i = 0; i < distances_m.size(); ++i) {
    if (distances_m[i] <= near) {
      tags[i] = CellTag::kCenter;
    } else if (distances_m[i] >= far) {
      tags[i] = CellTag::kEdge;
    }
  }
  return tags;
}

}  // namespace mecfl
