#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mecfl/cost_model.hpp"
#include "mecfl/errors.hpp"
#include "mecfl/link_model.hpp"

using namespace mecfl;

namespace {

// p g / n0 = 1 exactly, so R = bandwidth.
UserProfile unit_snr_user(std::size_t samples) {
  UserProfile u;
  u.transmit_power_w = 1.0;
  u.channel_gain = 1.0;
  u.cpu_hz = 1e9;
  u.energy_budget_j = 50.0;
  u.dataset_size = samples;
  return u;
}

SystemConfig unit_noise_config() {
  SystemConfig cfg;
  cfg.noise_power_w = 1.0;
  cfg.bandwidth_hz = 20e6;
  cfg.bytes_per_sample = 1000.0;
  cfg.bytes_per_weight_element = 4.0;
  cfg.cycles_per_byte = 100.0;
  cfg.edge_cpu_hz = 1e9;
  return cfg;
}

AllocationState state(std::vector<double> delta, std::vector<double> gamma, std::vector<double> off,
                      std::vector<double> wgt) {
  const std::size_t n = delta.size();
  AllocationVectors v{std::move(delta), std::move(gamma), std::move(off), std::move(wgt),
                      std::vector<double>(n, 0.5), std::vector<double>(n, 0.5)};
  return validate_allocation(std::move(v), n);
}

}  // namespace

TEST_SUITE("link_model") {
  TEST_CASE("base rate at SNR 1 and 3") {
    SystemConfig cfg = unit_noise_config();
    UserProfile u = unit_snr_user(1);
    CHECK(base_rate(u, cfg).value() == 20e6);
    u.transmit_power_w = 3.0;
    CHECK(base_rate(u, cfg).value() == 40e6);
  }

  TEST_CASE("base rate matches a high-precision reference") {
    // 20e6 * log2(21), evaluated with 30 significant digits.
    constexpr double kReference = 87846348.45557520577791;
    SystemConfig cfg;
    UserProfile u;
    u.transmit_power_w = 0.2;
    u.channel_gain = 1e-7;
    cfg.noise_power_w = 1e-9;
    cfg.bandwidth_hz = 20e6;
    CHECK(base_rate(u, cfg).value() == doctest::Approx(kReference).epsilon(1e-14));
  }

  TEST_CASE("offload and upload rates scale the base rate") {
    SystemConfig cfg = unit_noise_config();
    UserProfile u = unit_snr_user(1);
    CHECK(offload_rate(u, {0.5, 1.0, 0.0, 0.5}, cfg).value() == 0.0);
    CHECK(offload_rate(u, {0.5, 1.0, 1.0, 0.5}, cfg).value() == 20e6);
    CHECK(upload_rate(u, {0.5, 1.0, 1.0, 0.0}, cfg).value() == 0.0);
    CHECK(upload_rate(u, {0.5, 1.0, 1.0, 0.5}, cfg).value() == 1e7);
    CHECK(upload_rate(u, {0.5, 1.0, 1.0, 1.0 / 50.0}, cfg).value() == doctest::Approx(4e5).epsilon(1e-15));
    u.transmit_power_w = 3.0;
    CHECK(offload_rate(u, {0.5, 1.0, 0.25, 0.5}, cfg).value() == 1e7);
    const LinkRates r = link_rates(u, {0.5, 1.0, 0.25, 0.5}, cfg);
    CHECK(r.base_rate.value() == 40e6);
    CHECK(r.upload_rate.value() == 20e6);
  }

  TEST_CASE("rate is increasing in gain, decreasing in noise, linear in share") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logu(-10.0, -5.0);
    std::uniform_real_distribution<double> share(0.0, 0.5);
    SystemConfig cfg;
    for (int k = 0; k < 500; ++k) {
      UserProfile a;
      a.channel_gain = std::pow(10.0, logu(rng));
      UserProfile b = a;
      b.channel_gain = a.channel_gain * 1.01;
      CHECK(base_rate(b, cfg) > base_rate(a, cfg));
      SystemConfig noisy = cfg;
      noisy.noise_power_w *= 1.5;
      CHECK(base_rate(a, noisy) < base_rate(a, cfg));
      const double w = share(rng);
      const double single = offload_rate(a, {0.5, 1, w, 0.5}, cfg).value();
      const double twice = offload_rate(a, {0.5, 1, 2 * w, 0.5}, cfg).value();
      CHECK(twice == doctest::Approx(2 * single).epsilon(1e-15));
    }
  }
}

TEST_SUITE("cost_model") {
  TEST_CASE("local time: 1e6 bytes at 1e9 cycles/s plus a 0.05 s upload") {
    const SystemConfig cfg = unit_noise_config();
    const UserProfile u = unit_snr_user(1000);  // 1e6 bytes
    const std::size_t dim = 31250;              // 125000 bytes = 1e6 bits at 20e6 bit/s
    const UserAllocation a{0.0, 1.0, 0.5, 1.0};
    CHECK(weight_upload_time(u, a, dim, cfg).value() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(local_time(u, a, dim, cfg).value() == doctest::Approx(0.15).epsilon(1e-14));
  }

  TEST_CASE("local time structure") {
    const SystemConfig cfg = unit_noise_config();
    const UserProfile u = unit_snr_user(1000);
    const std::size_t dim = 31250;
    CHECK(local_time(u, {1.0, 0.0, 0.5, 1.0}, dim, cfg).value() == weight_upload_time(u, {1.0, 0.0, 0.5, 1.0}, dim, cfg).value());
    const double half = local_training_time(u, {0.3, 0.4, 0.5, 1.0}, cfg).value();
    const double full = local_training_time(u, {0.3, 0.8, 0.5, 1.0}, cfg).value();
    CHECK(full == doctest::Approx(half / 2).epsilon(1e-15));
    CHECK(weight_upload_time(u, {0.3, 0.4, 0.5, 1.0}, dim, cfg) == weight_upload_time(u, {0.3, 0.8, 0.5, 1.0}, dim, cfg));
  }

  TEST_CASE("degenerate divisors raise typed errors") {
    const SystemConfig cfg = unit_noise_config();
    const UserProfile u = unit_snr_user(1000);
    CHECK_THROWS_AS(local_time(u, {0.5, 0.0, 0.5, 1.0}, 10, cfg), DegenerateDivisor);
    CHECK_THROWS_AS(local_time(u, {0.5, 1.0, 0.5, 0.0}, 10, cfg), DegenerateDivisor);
    CHECK_THROWS_AS(offload_energy(u, {0.5, 1.0, 0.0, 1.0}, cfg), DegenerateDivisor);
    CHECK_THROWS_AS(local_energy(u, {0.5, 1.0, 0.5, 0.0}, 10, cfg), DegenerateDivisor);
    CHECK(offload_energy(u, {0.0, 1.0, 0.0, 1.0}, cfg).value() == 0.0);
  }

  TEST_CASE("local compute energy: 1e-28 * 1e8 * (1.2e9)^2") {
    SystemConfig cfg = unit_noise_config();
    cfg.chip_capacitance = 1e-28;
    UserProfile u = unit_snr_user(1000);
    u.cpu_hz = 1.2e9;
    CHECK(local_compute_energy(u, {0.0, 1.0, 0.5, 1.0}, cfg).value() == doctest::Approx(0.0144).epsilon(1e-13));
    CHECK(local_compute_energy(u, {1.0, 1.0, 0.5, 1.0}, cfg).value() == 0.0);
  }

  TEST_CASE("local energy at gamma 0 is the upload energy") {
    const SystemConfig cfg = unit_noise_config();
    const UserProfile u = unit_snr_user(1000);
    const UserAllocation a{0.0, 0.0, 0.5, 0.5};
    const double upload = u.transmit_power_w * weight_upload_time(u, a, 31250, cfg).value();
    CHECK(local_energy(u, a, 31250, cfg).value() == doctest::Approx(upload).epsilon(1e-15));
  }

  TEST_CASE("offload energy: 0.2 W sending 8e6 bits at 1e7 bit/s") {
    const SystemConfig cfg = unit_noise_config();
    UserProfile u = unit_snr_user(1000);
    u.transmit_power_w = 0.2;
    u.channel_gain = 5.0;  // p g / n0 = 1
    CHECK(offload_energy(u, {1.0, 1.0, 0.5, 1.0}, cfg).value() == doctest::Approx(0.16).epsilon(1e-14));
    CHECK(offload_energy(u, {0.0, 1.0, 0.5, 1.0}, cfg).value() == 0.0);
    const double e1 = offload_energy(u, {0.7, 1.0, 0.2, 1.0}, cfg).value();
    const double e2 = offload_energy(u, {0.7, 1.0, 0.4, 1.0}, cfg).value();
    CHECK(e2 == doctest::Approx(e1 / 2).epsilon(1e-15));
  }

  TEST_CASE("edge time: single user, 2 s offload plus 0.5 s compute") {
    const SystemConfig cfg = unit_noise_config();
    const std::vector<UserProfile> users{unit_snr_user(5000)};  // 5e6 bytes
    const AllocationState s = state({1.0}, {1.0}, {1.0}, {1.0});
    CHECK(offload_time(users[0], s.user(0), cfg).value() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(edge_compute_time(users, s, cfg).value() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(edge_time_total(users, s, cfg).value() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(edge_time_user(0, users, s, cfg) == edge_time_total(users, s, cfg));
  }

  TEST_CASE("edge time: offloads of 1 s and 3 s share 0.5 s of compute") {
    const SystemConfig cfg = unit_noise_config();
    const std::vector<UserProfile> users{unit_snr_user(1250), unit_snr_user(3750)};
    const AllocationState s = state({1.0, 1.0}, {1.0, 1.0}, {0.5, 0.5}, {0.5, 0.5});
    CHECK(edge_time_user(0, users, s, cfg).value() == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(edge_time_user(1, users, s, cfg).value() == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(edge_time_total(users, s, cfg).value() == doctest::Approx(3.5).epsilon(1e-14));
  }

  TEST_CASE("edge time with nobody offloading is zero") {
    const SystemConfig cfg = unit_noise_config();
    const std::vector<UserProfile> users{unit_snr_user(100), unit_snr_user(200)};
    const AllocationState s = state({0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}, {0.5, 0.5});
    CHECK(edge_time_total(users, s, cfg).value() == 0.0);
    const double t1 = local_time(users[0], s.user(0), 10, cfg).value();
    const double t2 = local_time(users[1], s.user(1), 10, cfg).value();
    CHECK(total_time(users, s, 10, cfg).value() == std::max(t1, t2));
  }

  TEST_CASE("a non-offloading user sees only the shared compute") {
    const SystemConfig cfg = unit_noise_config();
    const std::vector<UserProfile> users{unit_snr_user(100), unit_snr_user(200)};
    const AllocationState s = state({0.0, 0.5}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5});
    CHECK(edge_time_user(0, users, s, cfg) == edge_compute_time(users, s, cfg));
  }

  TEST_CASE("randomised group consistency") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::uniform_int_distribution<std::size_t> count(1, 5);
    std::uniform_int_distribution<std::size_t> samples(10, 2000);
    for (int trial = 0; trial < 300; ++trial) {
      SystemConfig cfg;
      const std::size_t n = count(rng);
      std::vector<UserProfile> users;
      std::vector<double> delta, gamma, off, wgt;
      for (std::size_t i = 0; i < n; ++i) {
        UserProfile u;
        u.id = i;
        u.channel_gain = 1e-8 * unit(rng);
        u.dataset_size = samples(rng);
        users.push_back(u);
        delta.push_back(unit(rng));
        gamma.push_back(unit(rng));
        off.push_back(1.0 / static_cast<double>(n));
        wgt.push_back(1.0 / static_cast<double>(n));
      }
      const AllocationState s = state(delta, gamma, off, wgt);
      double max_user = 0.0;
      double max_local = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        max_user = std::max(max_user, edge_time_user(i, users, s, cfg).value());
        max_local = std::max(max_local, local_time(users[i], s.user(i), 500, cfg).value());
        const double sum = local_energy(users[i], s.user(i), 500, cfg).value() +
                           offload_energy(users[i], s.user(i), cfg).value();
        CHECK(total_energy(users[i], s.user(i), 500, cfg).value() == doctest::Approx(sum).epsilon(1e-15));
      }
      CHECK(max_user == edge_time_total(users, s, cfg).value());
      CHECK(total_time(users, s, 500, cfg).value() == std::max(max_local, max_user));

      const RoundCosts rc = evaluate_round(users, s, 500, cfg);
      CHECK(rc.t_total == total_time(users, s, 500, cfg));
      CHECK(rc.t_edge == edge_time_total(users, s, cfg));
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(rc.t_local[i] == local_time(users[i], s.user(i), 500, cfg));
        CHECK(rc.e_total[i] == total_energy(users[i], s.user(i), 500, cfg));
        CHECK(rc.t_edge_user[i] == edge_time_user(i, users, s, cfg));
      }
    }
  }
}
