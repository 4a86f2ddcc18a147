#include "mecfl/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mecfl/cost_model.hpp"
#include "mecfl/fl_engine.hpp"
#include "mecfl/resource_optimizer.hpp"

namespace mecfl {

namespace {

enum Stream : std::uint64_t { kSplit = 1, kLocalTrain = 2, kEdgeTrain = 3 };

void check_population(const Population& pop, const SystemConfig& cfg) {
  cfg.validate();
  if (pop.users.empty()) throw ValidationError("population has no users");
  if (pop.user_data.size() != pop.users.size()) throw ValidationError("one dataset per user is required");
  if (pop.test_set.empty()) throw ValidationError("test set is empty");
  for (std::size_t i = 0; i < pop.users.size(); ++i) {
    pop.users[i].validate();
    const Dataset& d = pop.user_data[i];
    if (d.sample_count() != pop.users[i].dataset_size) {
      throw ValidationError("user " + std::to_string(i) + ": profile dataset_size disagrees with its data");
    }
    if (d.feature_count() != pop.test_set.feature_count() || d.class_count() != pop.test_set.class_count()) {
      throw ValidationError("user " + std::to_string(i) + ": data shape differs from the test set");
    }
  }
}

double population_train_loss(std::span<const double> w, const Population& pop) {
  double total = 0.0;
  std::size_t count = 0;
  for (const Dataset& d : pop.user_data) {
    total += evaluate_loss(w, d) * static_cast<double>(d.sample_count());
    count += d.sample_count();
  }
  return total / static_cast<double>(count);
}

class RoundEngine {
 public:
  RoundEngine(const Population& pop, const SystemConfig& cfg, const RunOptions& opt)
      : pop_(pop), cfg_(cfg), opt_(opt), n_(pop.users.size()) {
    dim_ = weight_dim(pop.test_set.feature_count(), pop.test_set.class_count());
    global_.assign(dim_, 0.0);
  }

  ExperimentResult run() {
    if (opt_.max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
    ExperimentResult result;
    AllocationVectors v = initial_allocation();

    for (std::size_t k = 1; k <= opt_.max_iterations; ++k) {
      try {
        if (k > 1) best_responses(v, result);
        const AllocationState in_force = validate_allocation(v, n_);
        const RoundCosts costs = evaluate_round(pop_.users, in_force, dim_, cfg_);
        const ModelState model = train_round(in_force, k);
        edge_update(v, costs, in_force);

        RoundMetrics m;
        m.iteration = k;
        m.t_local = costs.t_local;
        m.t_edge = costs.t_edge;
        m.t_total = costs.t_total;
        m.e_total = costs.e_total;
        m.test_loss = evaluate_loss(global_, pop_.test_set);
        m.train_loss = population_train_loss(global_, pop_);
        m.weighted_score = cfg_.loss_weight * m.test_loss + cfg_.time_weight * m.t_total.value();

        result.trace.push_back(std::move(m));
        result.allocations.push_back(in_force);
        result.final_model = model;
      } catch (const IterationFailure&) {
        throw;
      } catch (const Error& e) {
        throw IterationFailure(k, e.what());
      }
      result.iterations_used = k;

      if (opt_.stop_on_convergence && k >= 2) {
        const RoundMetrics& cur = result.trace[k - 1];
        const RoundMetrics& prev = result.trace[k - 2];
        if (std::abs(cur.test_loss - prev.test_loss) <= cfg_.convergence_tol &&
            std::abs(cur.t_total.value() - prev.t_total.value()) <= cfg_.convergence_tol) {
          result.converged = true;
          break;
        }
      }
    }
    result.final_allocation = validate_allocation(std::move(v), n_);
    return result;
  }

 private:
  AllocationVectors initial_allocation() const {
    std::mt19937_64 rng(cfg_.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    AllocationVectors v;
    const double share = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const double delta = unit(rng);
      const double gamma = unit(rng);
      v.delta.push_back(opt_.pinned_delta.value_or(delta));
      v.gamma.push_back(opt_.pinned_gamma.value_or(gamma));
      v.uplink_offload.push_back(share);
      v.uplink_weight.push_back(share);
      v.lambda_offload.push_back(0.5);
      v.lambda_local.push_back(0.5);
    }
    return v;
  }

  // CPU share then offload fraction for every user, in id order.
  void best_responses(AllocationVectors& v, ExperimentResult& result) const {
    const AllocationVectors snapshot = v;
    for (std::size_t i = 0; i < n_; ++i) {
      if (opt_.pinned_gamma) {
        v.gamma[i] = *opt_.pinned_gamma;
      } else {
        AllocationVectors view = opt_.jacobi_sweep ? snapshot : v;
        const UserAllocation a{view.delta[i], view.gamma[i], view.uplink_offload[i], view.uplink_weight[i]};
        const GammaSolution g = solve_gamma(pop_.users[i], a, dim_, cfg_);
        if (g.budget_exhausted) {
          v.gamma[i] = cfg_.gamma_floor;
          ++result.budget_exhausted_events;
        } else if (g.gamma <= 0.0 && v.delta[i] < 1.0) {
          v.gamma[i] = cfg_.gamma_floor;
        } else {
          v.gamma[i] = g.gamma;
        }
      }
      if (opt_.pinned_delta) {
        v.delta[i] = *opt_.pinned_delta;
      } else {
        AllocationVectors view = opt_.jacobi_sweep ? snapshot : v;
        view.gamma[i] = v.gamma[i];
        const AllocationState s = validate_allocation(std::move(view), n_);
        v.delta[i] = solve_delta(i, pop_.users, s, dim_, cfg_).delta;
      }
    }
  }

  void edge_update(AllocationVectors& v, const RoundCosts& costs, const AllocationState& in_force) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const Multipliers m = update_multipliers(costs.e_total[i], Joules(pop_.users[i].energy_budget_j),
                                               v.lambda_offload[i], cfg_);
      v.lambda_offload[i] = m.offload;
      v.lambda_local[i] = m.local;
    }
    if (opt_.uniform_bandwidth) return;

    AllocationVectors with_lambda = in_force.vectors();
    with_lambda.lambda_offload = v.lambda_offload;
    with_lambda.lambda_local = v.lambda_local;
    const AllocationState s = validate_allocation(std::move(with_lambda), n_);

    const std::vector<double> off = offload_share_weights(pop_.users, s, cfg_);
    // Nobody offloads: the offload split is unused, keep the previous one.
    if (std::any_of(off.begin(), off.end(), [](double x) { return x > 0.0; })) {
      v.uplink_offload = normalize_shares(off, Simplex::kOffload);
    }
    v.uplink_weight = normalize_shares(weight_share_weights(pop_.users, s, dim_, cfg_), Simplex::kWeight);
  }

  ModelState train_round(const AllocationState& alloc, std::size_t k) {
    ModelState model;
    model.dim = dim_;
    const TrainOptions topt = train_options(cfg_);
    std::vector<Dataset> offloaded;
    offloaded.reserve(n_);

    for (std::size_t i = 0; i < n_; ++i) {
      SplitDataset split =
          split_dataset(pop_.user_data[i], alloc.delta()[i], derive_seed(cfg_.rng_seed, kSplit, k, i));
      model.dataset_sizes.push_back(pop_.user_data[i].sample_count());
      model.local_trainset_sizes.push_back(split.local_part.sample_count());
      model.offload_sizes.push_back(split.offload_part.sample_count());
      if (split.local_part.empty()) {
        model.local_weights.push_back(global_);
      } else {
        model.local_weights.push_back(
            train(global_, split.local_part, topt, derive_seed(cfg_.rng_seed, kLocalTrain, k, i)));
      }
      offloaded.push_back(std::move(split.offload_part));
    }

    std::vector<const Dataset*> parts;
    for (const Dataset& d : offloaded) {
      if (!d.empty()) parts.push_back(&d);
    }
    if (parts.empty()) {
      model.edge_weights = global_;
      model.edge_trainset_size = 0;
    } else {
      const Dataset pool = Dataset::concat(parts);
      model.edge_trainset_size = pool.sample_count();
      model.edge_weights = train(global_, pool, topt, derive_seed(cfg_.rng_seed, kEdgeTrain, k, 0));
    }

    model.global_weights = global_;
    global_ = aggregate(model);
    model.global_weights = global_;
    return model;
  }

  const Population& pop_;
  const SystemConfig& cfg_;
  const RunOptions& opt_;
  std::size_t n_;
  std::size_t dim_ = 0;
  std::vector<double> global_;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t round, std::uint64_t user) {
  std::uint64_t x = base;
  for (std::uint64_t part : {stream, round, user}) {
    x += 0x9e3779b97f4a7c15ULL + part;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x ^= x >> 31;
  }
  return x;
}

ExperimentResult run_proposed(const Population& pop, const SystemConfig& cfg, const RunOptions& opt) {
  check_population(pop, cfg);
  if (opt.pinned_delta) project_unit_interval(*opt.pinned_delta);
  if (opt.pinned_gamma && !(*opt.pinned_gamma > 0.0 && *opt.pinned_gamma <= 1.0)) {
    throw ValidationError("pinned gamma must lie in (0, 1]");
  }
  return RoundEngine(pop, cfg, opt).run();
}

ExperimentResult run_traditional(const Population& pop, const SystemConfig& cfg, std::size_t rounds,
                                 RunOptions opt) {
  opt.max_iterations = rounds;
  opt.pinned_delta = 0.0;
  return run_proposed(pop, cfg, opt);
}

ExperimentResult run_centralized(const Population& pop, const SystemConfig& cfg, RunOptions opt) {
  opt.pinned_delta = 1.0;
  return run_proposed(pop, cfg, opt);
}

}  // namespace mecfl
