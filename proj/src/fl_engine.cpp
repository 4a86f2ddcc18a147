#include "mecfl/fl_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mecfl/errors.hpp"

namespace mecfl {

namespace {

void check_shape(std::span<const double> w, std::size_t features, std::size_t classes) {
  if (w.size() != weight_dim(features, classes)) {
    throw ValidationError("weight vector has " + std::to_string(w.size()) + " entries, expected " +
                          std::to_string(weight_dim(features, classes)));
  }
}

double class_score(std::span<const double> w, std::span<const double> x, std::size_t c) {
  const std::size_t stride = x.size() + 1;
  const double* wc = w.data() + c * stride;
  double z = wc[x.size()];
  for (std::size_t k = 0; k < x.size(); ++k) z += wc[k] * x[k];
  return z;
}

}  // namespace

std::size_t weight_dim(std::size_t feature_count, std::size_t class_count) {
  return (feature_count + 1) * class_count;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double sample_loss(std::span<const double> w, std::span<const double> x, int label, std::size_t class_count) {
  double loss = 0.0;
  for (std::size_t c = 0; c < class_count; ++c) {
    const double target = static_cast<std::size_t>(label) == c ? 1.0 : 0.0;
    const double r = sigmoid(class_score(w, x, c)) - target;
    loss += r * r;
  }
  return loss;
}

void accumulate_sample_gradient(std::span<const double> w, std::span<const double> x, int label,
                                std::size_t class_count, double scale, std::span<double> grad) {
  const std::size_t stride = x.size() + 1;
  for (std::size_t c = 0; c < class_count; ++c) {
    const double target = static_cast<std::size_t>(label) == c ? 1.0 : 0.0;
    const double s = sigmoid(class_score(w, x, c));
    const double g = scale * 2.0 * (s - target) * s * (1.0 - s);
    double* gc = grad.data() + c * stride;
    for (std::size_t k = 0; k < x.size(); ++k) gc[k] += g * x[k];
    gc[x.size()] += g;
  }
}

double evaluate_loss(std::span<const double> w, const Dataset& d) {
  if (d.empty()) throw EmptyDataset("evaluate_loss on an empty dataset");
  check_shape(w, d.feature_count(), d.class_count());
  double total = 0.0;
  for (std::size_t j = 0; j < d.sample_count(); ++j) {
    total += sample_loss(w, d.row(j), d.label(j), d.class_count());
  }
  return total / static_cast<double>(d.sample_count());
}

std::vector<double> loss_gradient(std::span<const double> w, const Dataset& d) {
  if (d.empty()) throw EmptyDataset("loss_gradient on an empty dataset");
  check_shape(w, d.feature_count(), d.class_count());
  std::vector<double> grad(w.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(d.sample_count());
  for (std::size_t j = 0; j < d.sample_count(); ++j) {
    accumulate_sample_gradient(w, d.row(j), d.label(j), d.class_count(), scale, grad);
  }
  return grad;
}

double accuracy(std::span<const double> w, const Dataset& d) {
  if (d.empty()) throw EmptyDataset("accuracy on an empty dataset");
  check_shape(w, d.feature_count(), d.class_count());
  std::size_t hits = 0;
  for (std::size_t j = 0; j < d.sample_count(); ++j) {
    std::size_t best = 0;
    double best_score = class_score(w, d.row(j), 0);
    for (std::size_t c = 1; c < d.class_count(); ++c) {
      const double s = class_score(w, d.row(j), c);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    if (best == static_cast<std::size_t>(d.label(j))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(d.sample_count());
}

TrainOptions train_options(const SystemConfig& cfg) {
  return {cfg.local_epochs, cfg.learning_rate, cfg.batch_size};
}

std::vector<double> train(std::span<const double> w_init, const Dataset& d, const TrainOptions& opt,
                          std::uint64_t seed) {
  if (d.empty()) throw EmptyDataset("train on an empty dataset");
  check_shape(w_init, d.feature_count(), d.class_count());
  if (!(opt.learning_rate > 0)) throw ValidationError("learning rate must be positive");
  if (opt.batch_size == 0) throw ValidationError("batch size must be positive");

  std::vector<double> w(w_init.begin(), w_init.end());
  std::vector<double> grad(w.size());
  std::vector<std::size_t> order(d.sample_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      const std::size_t stop = std::min(order.size(), start + opt.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t j = order[b];
        accumulate_sample_gradient(w, d.row(j), d.label(j), d.class_count(), scale, grad);
      }
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= opt.learning_rate * grad[k];
    }
  }
  return w;
}

std::vector<double> aggregation_coefficients(const ModelState& model) {
  model.check_consistency();
  const std::size_t total =
      std::accumulate(model.dataset_sizes.begin(), model.dataset_sizes.end(), std::size_t{0});
  if (total == 0) throw InconsistentSizes("aggregation over zero samples");
  const double n = static_cast<double>(total);
  std::vector<double> coef;
  coef.reserve(model.dataset_sizes.size() + 1);
  for (std::size_t s : model.local_trainset_sizes) coef.push_back(static_cast<double>(s) / n);
  coef.push_back(static_cast<double>(model.edge_trainset_size) / n);
  return coef;
}

std::vector<double> aggregate(const ModelState& model) {
  const std::vector<double> coef = aggregation_coefficients(model);
  std::vector<double> out(model.dim, 0.0);
  const std::size_t users = model.local_weights.size();
  for (std::size_t i = 0; i <= users; ++i) {
    if (coef[i] == 0.0) continue;
    const std::vector<double>& w = i < users ? model.local_weights[i] : model.edge_weights;
    for (std::size_t k = 0; k < model.dim; ++k) out[k] += coef[i] * w[k];
  }
  return out;
}

}  // namespace mecfl
