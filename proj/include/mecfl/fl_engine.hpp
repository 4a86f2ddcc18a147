#pragma once

// One-vs-rest logistic regression trained on the mean squared error between
// per-class sigmoid outputs and one-hot targets.
//
// Weights are laid out class-major: class c owns the block
// [c * (F + 1), (c + 1) * (F + 1)), feature weights first, bias last.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mecfl/dataset.hpp"
#include "mecfl/model_core.hpp"

namespace mecfl {

std::size_t weight_dim(std::size_t feature_count, std::size_t class_count);

double sigmoid(double z);

/// sum_c (sigmoid(w_c . x + b_c) - onehot_c)^2 for a single sample.
double sample_loss(std::span<const double> w, std::span<const double> x, int label, std::size_t class_count);

/// grad += scale * d(sample_loss)/dw.
void accumulate_sample_gradient(std::span<const double> w, std::span<const double> x, int label,
                                std::size_t class_count, double scale, std::span<double> grad);

/// Mean per-sample loss. Throws EmptyDataset.
double evaluate_loss(std::span<const double> w, const Dataset& d);

/// Gradient of evaluate_loss. Throws EmptyDataset.
std::vector<double> loss_gradient(std::span<const double> w, const Dataset& d);

/// Fraction of samples whose highest-scoring class equals the label.
double accuracy(std::span<const double> w, const Dataset& d);

struct TrainOptions {
  int epochs = 5;
  double learning_rate = 0.05;
  std::size_t batch_size = 32;
};

TrainOptions train_options(const SystemConfig& cfg);

/// Mini-batch SGD: each epoch reshuffles the rows (seeded) and steps on the
/// mean gradient of every batch. Throws EmptyDataset.
std::vector<double> train(std::span<const double> w_init, const Dataset& d, const TrainOptions& opt,
                          std::uint64_t seed);

/// Aggregation weights |D_local_i| / N for each user followed by
/// |D_edge| / N for the edge model, N = sum_i |D_i|. Throws InconsistentSizes.
std::vector<double> aggregation_coefficients(const ModelState& model);

/// Dataset-size weighted average of the local models and the edge model,
/// reduced in user-id order with the edge model last. Terms with zero weight
/// are skipped. Throws InconsistentSizes.
std::vector<double> aggregate(const ModelState& model);

}  // namespace mecfl
