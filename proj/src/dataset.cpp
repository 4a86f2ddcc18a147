#include "mecfl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mecfl/errors.hpp"
#include "mecfl/model_core.hpp"

namespace mecfl {

Dataset::Dataset(std::vector<double> features, std::vector<int> labels, std::size_t feature_count,
                 std::size_t class_count)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_count_(feature_count),
      class_count_(class_count) {
  if (feature_count_ == 0) throw ValidationError("dataset needs at least one feature");
  if (class_count_ == 0) throw ValidationError("dataset needs at least one class");
  if (features_.size() != labels_.size() * feature_count_) {
    throw ValidationError("feature matrix has " + std::to_string(features_.size()) + " values for " +
                          std::to_string(labels_.size()) + " labels of width " +
                          std::to_string(feature_count_));
  }
  for (int y : labels_) {
    if (y < 0 || static_cast<std::size_t>(y) >= class_count_) {
      throw ValidationError("label " + std::to_string(y) + " outside [0, " + std::to_string(class_count_) + ")");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<double> f;
  std::vector<int> y;
  f.reserve(indices.size() * feature_count_);
  y.reserve(indices.size());
  for (std::size_t idx : indices) {
    const auto r = row(idx);
    f.insert(f.end(), r.begin(), r.end());
    y.push_back(labels_[idx]);
  }
  Dataset out;
  out.features_ = std::move(f);
  out.labels_ = std::move(y);
  out.feature_count_ = feature_count_;
  out.class_count_ = class_count_;
  return out;
}

Dataset Dataset::concat(std::span<const Dataset* const> parts) {
  if (parts.empty()) throw ValidationError("concat of zero datasets");
  Dataset out;
  out.feature_count_ = parts.front()->feature_count_;
  out.class_count_ = parts.front()->class_count_;
  for (const Dataset* p : parts) {
    if (p->feature_count_ != out.feature_count_ || p->class_count_ != out.class_count_) {
      throw ValidationError("concat: datasets disagree in shape");
    }
    out.features_.insert(out.features_.end(), p->features_.begin(), p->features_.end());
    out.labels_.insert(out.labels_.end(), p->labels_.begin(), p->labels_.end());
  }
  return out;
}

std::size_t offload_count(double delta, std::size_t n) {
  const double x = project_unit_interval(delta) * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::floor(x + 0.5)));
}

SplitDataset split_dataset(const Dataset& d, double delta, std::uint64_t seed) {
  const std::size_t n = d.sample_count();
  const std::size_t k = offload_count(delta, n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  SplitDataset s;
  s.offload_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  s.local_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
  // Each part keeps source row order.
  std::sort(s.offload_indices.begin(), s.offload_indices.end());
  std::sort(s.local_indices.begin(), s.local_indices.end());
  s.offload_part = d.subset(s.offload_indices);
  s.local_part = d.subset(s.local_indices);
  return s;
}

}  // namespace mecfl
