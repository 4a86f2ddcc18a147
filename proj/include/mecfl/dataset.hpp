#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mecfl {

/// Row-major feature matrix with integer class labels in [0, class_count).
class Dataset {
 public:
  Dataset() = default;
  /// Throws ValidationError if the row count disagrees with the label count or
  /// a label is outside [0, class_count).
  Dataset(std::vector<double> features, std::vector<int> labels, std::size_t feature_count,
          std::size_t class_count);

  std::size_t sample_count() const { return labels_.size(); }
  std::size_t feature_count() const { return feature_count_; }
  std::size_t class_count() const { return class_count_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * feature_count_, feature_count_};
  }
  int label(std::size_t i) const { return labels_[i]; }

  const std::vector<double>& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }

  /// Copies the selected rows, in the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Concatenation; all parts must agree on feature and class counts.
  static Dataset concat(std::span<const Dataset* const> parts);

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  std::size_t feature_count_ = 0;
  std::size_t class_count_ = 0;
};

struct SplitDataset {
  Dataset local_part;
  Dataset offload_part;
  std::vector<std::size_t> local_indices;    // rows of the source dataset
  std::vector<std::size_t> offload_indices;
};

/// round(delta * n) with ties rounding up.
std::size_t offload_count(double delta, std::size_t n);

/// Uniform random partition without replacement; the offloaded part has
/// offload_count(delta, n) rows and the local part keeps the rest.
SplitDataset split_dataset(const Dataset& d, double delta, std::uint64_t seed);

}  // namespace mecfl
