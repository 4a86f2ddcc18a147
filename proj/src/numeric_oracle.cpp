#include "mecfl/numeric_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mecfl/cost_model.hpp"

namespace mecfl {

GridResult grid_minimize(const ScalarFn& f, double lo, double hi, std::size_t points, const Predicate& feasible) {
  if (points < 2) throw ValidationError("grid_minimize needs at least two points");
  if (!(lo < hi)) throw ValidationError("grid_minimize needs lo < hi");
  const double step = (hi - lo) / static_cast<double>(points - 1);
  bool found = false;
  GridResult best;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = k + 1 == points ? hi : lo + step * static_cast<double>(k);
    if (feasible && !feasible(x)) continue;
    const double fx = f(x);
    if (!found || fx < best.fx) {
      best = {x, fx};
      found = true;
    }
  }
  if (!found) throw NoFeasiblePoint("no grid point satisfies the constraint");
  return best;
}

double bisect_root(const ScalarFn& g, double lo, double hi, double tol) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (std::signbit(glo) == std::signbit(ghi)) throw NoSignChange("bisect_root: g(lo) and g(hi) share a sign");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (std::signbit(gm) == std::signbit(glo)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double finite_diff(const ScalarFn& f, double x, int order, double h) {
  if (order == 1) return (f(x + h) - f(x - h)) / (2.0 * h);
  if (order == 2) return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
  throw ValidationError("finite_diff supports order 1 or 2");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-user cost at each grid share k * resolution, k = 0..steps.
using CostTable = std::vector<std::vector<double>>;

struct Best {
  std::vector<std::size_t> k;
  double value = kInf;
};

void enumerate(const CostTable& table, std::span<const double> weights, bool use_max, std::size_t steps,
               std::size_t user, std::size_t remaining, std::vector<std::size_t>& k, Best& best) {
  if (user == table.size()) {
    double v = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      const double c = table[i][k[i]];
      v = use_max ? std::max(v, c) : v + weights[i] * c;
    }
    if (v < best.value || best.k.empty()) best = {k, v};
    return;
  }
  for (std::size_t s = 0; s <= remaining; ++s) {
    k[user] = s;
    enumerate(table, weights, use_max, steps, user + 1, remaining - s, k, best);
  }
}

Best search(const CostTable& table, std::span<const double> weights, bool use_max, std::size_t steps) {
  Best best;
  std::vector<std::size_t> k(table.size(), 0);
  enumerate(table, weights, use_max, steps, 0, steps, k, best);
  return best;
}

template <typename Fn>
double or_infinity(Fn&& fn) {
  try {
    return fn();
  } catch (const DegenerateDivisor&) {
    return kInf;
  }
}

}  // namespace

SimplexSearchResult simplex_minimize_uplink(std::span<const UserProfile> users, const AllocationState& alloc,
                                            std::size_t model_dim, const SystemConfig& cfg, double resolution,
                                            UplinkObjective objective) {
  if (users.size() > 3) throw InstanceTooLarge("exhaustive simplex search is limited to three users");
  if (users.empty()) throw ValidationError("simplex search needs at least one user");
  if (!(resolution > 0.0 && resolution <= 1.0)) throw ValidationError("resolution must lie in (0, 1]");
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
  const double step = 1.0 / static_cast<double>(steps);
  const bool use_max = objective == UplinkObjective::kMaxTime;

  const double compute = edge_compute_time(users, alloc, cfg).value();
  CostTable edge(users.size(), std::vector<double>(steps + 1));
  CostTable local(users.size(), std::vector<double>(steps + 1));
  for (std::size_t i = 0; i < users.size(); ++i) {
    UserAllocation a = alloc.user(i);
    for (std::size_t s = 0; s <= steps; ++s) {
      const double share = s == steps ? 1.0 : step * static_cast<double>(s);
      a.uplink_offload = share;
      a.uplink_weight = share;
      edge[i][s] = or_infinity([&] { return offload_time(users[i], a, cfg).value() + compute; });
      local[i][s] = or_infinity([&] { return local_time(users[i], a, model_dim, cfg).value(); });
    }
  }

  const Best off = search(edge, alloc.lambda_offload(), use_max, steps);
  const Best wgt = search(local, alloc.lambda_local(), use_max, steps);

  SimplexSearchResult out;
  for (std::size_t i = 0; i < users.size(); ++i) {
    out.offload.push_back(off.k[i] == steps ? 1.0 : step * static_cast<double>(off.k[i]));
    out.weight.push_back(wgt.k[i] == steps ? 1.0 : step * static_cast<double>(wgt.k[i]));
  }
  out.objective = use_max ? std::max(off.value, wgt.value) : off.value + wgt.value;
  return out;
}

}  // namespace mecfl
