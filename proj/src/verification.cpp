#include "mecfl/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mecfl/cost_model.hpp"
#include "mecfl/numeric_oracle.hpp"
#include "mecfl/resource_optimizer.hpp"

namespace mecfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

std::size_t uniform_count(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

UserProfile random_user(std::mt19937_64& rng, std::size_t id) {
  UserProfile u;
  u.id = id;
  u.transmit_power_w = uniform(rng, 0.1, 0.5);
  u.channel_gain = log_uniform(rng, 1e-9, 1e-6);
  u.cpu_hz = uniform(rng, 1.2e9, 1.5e9);
  u.energy_budget_j = uniform(rng, 45.0, 60.0);
  u.dataset_size = uniform_count(rng, 100, 2000);
  return u;
}

SystemConfig random_config(std::mt19937_64& rng) {
  SystemConfig cfg;
  cfg.chip_capacitance = log_uniform(rng, 1e-28, 1e-26);
  cfg.cycles_per_byte = uniform(rng, 50.0, 500.0);
  return cfg;
}

template <typename Fn>
double or_infinity(Fn&& fn) {
  try {
    return fn();
  } catch (const DegenerateDivisor&) {
    return kInf;
  }
}

AllocationState with_delta(const AllocationState& base, std::size_t i, double delta) {
  AllocationVectors v = base.vectors();
  v.delta[i] = delta;
  return validate_allocation(std::move(v), base.user_count());
}

std::string summary(std::size_t failures, std::size_t instances, const std::string& extra) {
  std::ostringstream os;
  os << failures << "/" << instances << " failures" << (extra.empty() ? "" : "; ") << extra;
  return os.str();
}

}  // namespace

UserInstance random_gamma_instance(std::mt19937_64& rng) {
  UserInstance inst;
  inst.cfg = random_config(rng);
  inst.user = random_user(rng, 0);
  inst.model_dim = uniform_count(rng, 100, 8000);
  inst.alloc.delta = uniform(rng, 0.0, 0.95);
  inst.alloc.uplink_offload = uniform(rng, 0.05, 1.0);
  inst.alloc.uplink_weight = uniform(rng, 0.05, 1.0);
  inst.alloc.gamma = 1.0;
  const double tx = offload_energy(inst.user, inst.alloc, inst.cfg).value() +
                    inst.user.transmit_power_w * weight_upload_time(inst.user, inst.alloc, inst.model_dim, inst.cfg).value();
  const double compute_at_full = local_compute_energy(inst.user, inst.alloc, inst.cfg).value();
  inst.user.energy_budget_j = tx + uniform(rng, 0.05, 1.5) * compute_at_full;
  return inst;
}

GroupInstance random_group_instance(std::mt19937_64& rng, std::size_t n_users) {
  GroupInstance g;
  g.cfg = random_config(rng);
  g.model_dim = uniform_count(rng, 100, 8000);
  AllocationVectors v;
  double off_sum = 0.0;
  double wgt_sum = 0.0;
  for (std::size_t i = 0; i < n_users; ++i) {
    g.users.push_back(random_user(rng, i));
    v.delta.push_back(uniform(rng, 0.0, 1.0));
    v.gamma.push_back(uniform(rng, 0.05, 1.0));
    v.uplink_offload.push_back(uniform(rng, 0.1, 1.0));
    v.uplink_weight.push_back(uniform(rng, 0.1, 1.0));
    const double lam = uniform(rng, 1e-3, 1.0 - 1e-3);
    v.lambda_offload.push_back(lam);
    v.lambda_local.push_back(1.0 - lam);
    off_sum += v.uplink_offload.back();
    wgt_sum += v.uplink_weight.back();
  }
  for (double& x : v.uplink_offload) x /= off_sum;
  for (double& x : v.uplink_weight) x /= wgt_sum;
  g.alloc = validate_allocation(std::move(v), n_users);
  return g;
}

CheckReport check_gamma_oracle(std::size_t instances, std::size_t grid_points, std::uint64_t seed) {
  CheckReport r{"gamma closed form vs constrained grid search", false, instances, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  const double step = 1.0 / static_cast<double>(grid_points - 1);
  std::size_t interior = 0;
  double worst_energy = 0.0;
  for (std::size_t n = 0; n < instances; ++n) {
    const UserInstance inst = random_gamma_instance(rng);
    const GammaSolution sol = solve_gamma(inst.user, inst.alloc, inst.model_dim, inst.cfg);

    UserAllocation a = inst.alloc;
    const auto t_local = [&](double g) {
      a.gamma = g;
      return or_infinity([&] { return local_time(inst.user, a, inst.model_dim, inst.cfg).value(); });
    };
    const auto within_budget = [&](double g) {
      a.gamma = g;
      return total_energy(inst.user, a, inst.model_dim, inst.cfg).value() <= inst.user.energy_budget_j;
    };
    const GridResult best = grid_minimize(t_local, 0.0, 1.0, grid_points, within_budget);

    const double err = std::abs(sol.gamma - best.x);
    r.worst = std::max(r.worst, err / step);
    bool ok = err <= step * (1.0 + 1e-9);
    if (sol.interior) {
      ++interior;
      a.gamma = sol.gamma;
      const double e = total_energy(inst.user, a, inst.model_dim, inst.cfg).value();
      const double rel = std::abs(e - inst.user.energy_budget_j) / inst.user.energy_budget_j;
      worst_energy = std::max(worst_energy, rel);
      ok = ok && rel <= 1e-6;
    }
    if (!ok) ++r.failures;
  }
  std::ostringstream extra;
  extra << interior << " interior; worst gap " << r.worst << " grid steps; worst budget mismatch " << worst_energy;
  r.detail = summary(r.failures, instances, extra.str());
  r.passed = r.failures == 0;
  return r;
}

CheckReport check_delta_oracle(std::size_t instances, std::uint64_t seed) {
  CheckReport r{"delta closed form vs bisection of t_local - t_edge", false, instances, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::size_t interior = 0;
  double worst_balance = 0.0;
  for (std::size_t n = 0; n < instances; ++n) {
    const GroupInstance g = random_group_instance(rng, uniform_count(rng, 2, 6));
    const std::size_t i = uniform_count(rng, 0, g.users.size() - 1);
    const DeltaSolution sol = solve_delta(i, g.users, g.alloc, g.model_dim, g.cfg);

    const auto gap = [&](double d) {
      const AllocationState s = with_delta(g.alloc, i, d);
      return local_time(g.users[i], s.user(i), g.model_dim, g.cfg).value() -
             edge_time_user(i, g.users, s, g.cfg).value();
    };
    double expected;
    if (gap(0.0) <= 0.0) {
      expected = 0.0;
    } else if (gap(1.0) >= 0.0) {
      expected = 1.0;
    } else {
      expected = bisect_root(gap, 0.0, 1.0, 1e-12);
    }
    const double err = std::abs(sol.delta - expected);
    r.worst = std::max(r.worst, err);
    bool ok = err <= 1e-8;
    if (sol.interior) {
      ++interior;
      const AllocationState s = with_delta(g.alloc, i, sol.delta);
      const double tl = local_time(g.users[i], s.user(i), g.model_dim, g.cfg).value();
      const double te = edge_time_user(i, g.users, s, g.cfg).value();
      const double rel = std::abs(tl - te) / std::max(tl, te);
      worst_balance = std::max(worst_balance, rel);
      ok = ok && rel <= 1e-6;
    }
    if (!ok) ++r.failures;
  }
  std::ostringstream extra;
  extra << interior << " interior; worst |delta - root| " << r.worst << "; worst time imbalance " << worst_balance;
  r.detail = summary(r.failures, instances, extra.str());
  r.passed = r.failures == 0;
  return r;
}

namespace {

GroupInstance random_uplink_instance(std::mt19937_64& rng) {
  GroupInstance g = random_group_instance(rng, 2);
  AllocationVectors v = g.alloc.vectors();
  for (double& d : v.delta) d = uniform(rng, 0.05, 1.0);
  g.alloc = validate_allocation(std::move(v), 2);
  return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

CheckReport check_uplink_oracle(std::size_t instances, double resolution, std::uint64_t seed) {
  CheckReport r{"uplink closed form vs exhaustive simplex search", false, instances, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  double worst_sum = 0.0;
  for (std::size_t n = 0; n < instances; ++n) {
    const GroupInstance g = random_uplink_instance(rng);
    const UplinkShares sol = solve_uplink(g.users, g.alloc, g.model_dim, g.cfg);
    const SimplexSearchResult grid = simplex_minimize_uplink(g.users, g.alloc, g.model_dim, g.cfg, resolution,
                                                             UplinkObjective::kMultiplierWeighted);
    const double err = std::max(max_abs_diff(sol.offload, grid.offload), max_abs_diff(sol.weight, grid.weight));
    double off_sum = 0.0;
    double wgt_sum = 0.0;
    for (double x : sol.offload) off_sum += x;
    for (double x : sol.weight) wgt_sum += x;
    const double sum_err = std::max(std::abs(off_sum - 1.0), std::abs(wgt_sum - 1.0));
    worst_sum = std::max(worst_sum, sum_err);
    r.worst = std::max(r.worst, err / resolution);
    if (err > resolution * (1.0 + 1e-9) || sum_err > 1e-12) ++r.failures;
  }
  std::ostringstream extra;
  extra << "worst gap " << r.worst << " steps; worst simplex-sum error " << worst_sum;
  r.detail = summary(r.failures, instances, extra.str());
  r.passed = r.failures == 0;
  return r;
}

CheckReport check_uplink_maxtime(std::size_t instances, double resolution, std::uint64_t seed) {
  CheckReport r{"uplink closed form vs max-time simplex search", false, instances, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  double worst_sum = 0.0;
  for (std::size_t n = 0; n < instances; ++n) {
    const GroupInstance g = random_uplink_instance(rng);
    const UplinkShares sol = solve_uplink(g.users, g.alloc, g.model_dim, g.cfg);
    const SimplexSearchResult grid = simplex_minimize_maxtime(g.users, g.alloc, g.model_dim, g.cfg, resolution);
    const double err = std::max(max_abs_diff(sol.offload, grid.offload), max_abs_diff(sol.weight, grid.weight));
    const double off_sum = std::accumulate(sol.offload.begin(), sol.offload.end(), 0.0);
    const double wgt_sum = std::accumulate(sol.weight.begin(), sol.weight.end(), 0.0);
    const double sum_err = std::max(std::abs(off_sum - 1.0), std::abs(wgt_sum - 1.0));
    worst_sum = std::max(worst_sum, sum_err);
    r.worst = std::max(r.worst, err / resolution);
    if (err > resolution * (1.0 + 1e-9) || sum_err > 1e-12) ++r.failures;
  }
  std::ostringstream extra;
  extra << "worst gap " << r.worst << " steps; worst simplex-sum error " << worst_sum;
  r.detail = summary(r.failures, instances, extra.str());
  r.passed = r.failures == 0;
  return r;
}

CheckReport check_convexity(std::size_t points, std::uint64_t seed) {
  CheckReport r{"curvature and monotonicity by finite differences", false, 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  constexpr double kFirstStep = 1e-6;
  constexpr double kSecondStep = 1e-4;
  constexpr double kCurvatureFloor = -1e-6;
  constexpr double kSignMargin = 1e-12;
  double min_curvature = kInf;
  std::size_t sign_failures = 0;
  std::size_t curvature_failures = 0;

  for (std::size_t n = 0; n < points; ++n) {
    UserInstance inst = random_gamma_instance(rng);
    inst.alloc.delta = uniform(rng, 0.05, 0.95);
    inst.alloc.gamma = uniform(rng, 0.1, 0.9);
    inst.alloc.uplink_offload = uniform(rng, 0.1, 0.9);
    inst.alloc.uplink_weight = uniform(rng, 0.1, 0.9);
    const UserProfile& u = inst.user;
    const std::size_t dim = inst.model_dim;
    const SystemConfig& cfg = inst.cfg;

    // f(x) with one allocation field replaced by x.
    const auto along = [&](double UserAllocation::*field, auto metric) {
      return [&, field, metric](double x) {
        UserAllocation a = inst.alloc;
        a.*field = x;
        return metric(a);
      };
    };
    const auto energy = [&](const UserAllocation& a) { return total_energy(u, a, dim, cfg).value(); };
    const auto t_local = [&](const UserAllocation& a) { return local_time(u, a, dim, cfg).value(); };
    const auto t_edge = [&](const UserAllocation& a) {
      AllocationVectors v{{a.delta}, {a.gamma}, {a.uplink_offload}, {a.uplink_weight}, {0.5}, {0.5}};
      const AllocationState s = validate_allocation(std::move(v), 1);
      return edge_time_user(0, std::span<const UserProfile>(&u, 1), s, cfg).value();
    };

    struct Probe {
      ScalarFn f;
      double x;
      int sign;  // expected sign of the first derivative
    };
    const Probe probes[] = {
        {along(&UserAllocation::gamma, energy), inst.alloc.gamma, +1},
        {along(&UserAllocation::uplink_offload, energy), inst.alloc.uplink_offload, -1},
        {along(&UserAllocation::uplink_weight, energy), inst.alloc.uplink_weight, -1},
        {along(&UserAllocation::gamma, t_local), inst.alloc.gamma, -1},
        {along(&UserAllocation::uplink_weight, t_local), inst.alloc.uplink_weight, -1},
        {along(&UserAllocation::uplink_offload, t_edge), inst.alloc.uplink_offload, -1},
    };
    for (const Probe& p : probes) {
      ++r.instances;
      const double d1 = finite_diff(p.f, p.x, 1, kFirstStep);
      const double d2 = finite_diff(p.f, p.x, 2, kSecondStep);
      min_curvature = std::min(min_curvature, d2);
      const bool sign_ok = p.sign > 0 ? d1 > kSignMargin : d1 < -kSignMargin;
      const bool curv_ok = d2 >= kCurvatureFloor;
      if (!sign_ok) ++sign_failures;
      if (!curv_ok) ++curvature_failures;
      if (!sign_ok || !curv_ok) ++r.failures;
    }
  }
  r.worst = min_curvature;
  std::ostringstream extra;
  extra << sign_failures << " sign, " << curvature_failures << " curvature; smallest second derivative "
        << min_curvature;
  r.detail = summary(r.failures, r.instances, extra.str());
  r.passed = r.failures == 0;
  return r;
}

std::vector<CheckReport> run_oracle_suite(const OracleSuiteOptions& opt) {
  return {
      check_gamma_oracle(opt.gamma_instances, opt.gamma_grid_points, opt.seed),
      check_delta_oracle(opt.delta_instances, opt.seed + 1),
      check_uplink_oracle(opt.uplink_instances, opt.uplink_resolution, opt.seed + 2),
      check_uplink_maxtime(opt.uplink_instances, opt.uplink_resolution, opt.seed + 2),
      check_convexity(opt.convexity_points, opt.seed + 3),
  };
}

}  // namespace mecfl
