#include <doctest.h>

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "mecfl/errors.hpp"
#include "mecfl/fl_engine.hpp"
#include "mecfl/idx.hpp"
#include "mecfl/report.hpp"
#include "mecfl/sweep.hpp"

using namespace mecfl;
using mecfl::testing::small_spec;

namespace {

namespace fs = std::filesystem;

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

fs::path temp_file(const std::string& name, const std::string& bytes) {
  const fs::path p = fs::temp_directory_path() / ("mecfl_test_" + name);
  std::ofstream(p, std::ios::binary) << bytes;
  return p;
}

std::string idx_images(std::uint32_t magic, std::uint32_t n, std::uint32_t rows, std::uint32_t cols,
                       std::size_t pixels) {
  std::string s;
  put_u32(s, magic);
  put_u32(s, n);
  put_u32(s, rows);
  put_u32(s, cols);
  for (std::size_t k = 0; k < pixels; ++k) s.push_back(static_cast<char>(k % 256));
  return s;
}

std::string idx_labels(std::uint32_t magic, std::uint32_t n, std::size_t count) {
  std::string s;
  put_u32(s, magic);
  put_u32(s, n);
  for (std::size_t k = 0; k < count; ++k) s.push_back(static_cast<char>(k % 10));
  return s;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value == nullptr) {
      unsetenv("MECFL_SEED");
    } else {
      setenv("MECFL_SEED", value, 1);
    }
  }
  ~EnvGuard() { unsetenv("MECFL_SEED"); }
};

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("emitted config parses back to the same spec") {
    ExperimentSpec spec = small_spec(42);
    spec.scenario = Scenario::kSweepGamma;
    spec.system.bandwidth_hz = 1.5e7;
    spec.energy_budget_range = {10.0, 20.0};
    spec.trace_path = "trace.jsonl";
    spec.data_source = DataSource::kIdx;
    spec.idx_train_images = "a";
    CHECK(parse_spec(emit_spec(spec)) == spec);
    CHECK(parse_spec(emit_spec(ExperimentSpec{})) == ExperimentSpec{});
  }

  TEST_CASE("missing keys keep defaults") {
    const ExperimentSpec spec = parse_spec(R"({"users.count": 3, "seed": 9})");
    CHECK(spec.user_count == 3);
    CHECK(spec.seed() == 9);
    CHECK(spec.samples_per_user == ExperimentSpec{}.samples_per_user);
  }

  TEST_CASE("unknown keys, wrong types and bad JSON are rejected") {
    CHECK_THROWS_AS(parse_spec(R"({"users.cuont": 3})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"users.count": "3"})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"users.count": -3})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"scenario": "fastest"})"), ValidationError);
    CHECK_THROWS_AS(parse_spec(R"({"data.source": "csv"})"), ValidationError);
    CHECK_THROWS_AS(parse_spec("[1, 2]"), ValidationError);
    CHECK_THROWS_AS(parse_spec("{"), ValidationError);
  }

  TEST_CASE("scenario names round-trip") {
    for (Scenario s : {Scenario::kProposed, Scenario::kTraditional, Scenario::kCentralized,
                       Scenario::kSweepOffload, Scenario::kSweepGamma}) {
      CHECK(parse_scenario(to_string(s)) == s);
    }
  }

  TEST_CASE("validation catches bad ranges") {
    ExperimentSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.cpu_hz_range = {2e9, 1e9};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = ExperimentSpec{};
    spec.sweep_step = 0.0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = ExperimentSpec{};
    spec.data_source = DataSource::kIdx;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
  }

  TEST_CASE("MECFL_SEED overrides the seed") {
    ExperimentSpec spec;
    {
      EnvGuard env("12345");
      apply_environment(spec);
      CHECK(spec.seed() == 12345);
    }
    {
      EnvGuard env(nullptr);
      spec.system.rng_seed = 4;
      apply_environment(spec);
      CHECK(spec.seed() == 4);
    }
    for (const char* bad : {"", "12x", "-1", "abc"}) {
      EnvGuard env(bad);
      CHECK_THROWS_AS(apply_environment(spec), ValidationError);
    }
  }

  TEST_CASE("config files load") {
    const fs::path p = temp_file("config.json", R"({"users.count": 5, "sweep.step": 0.25})");
    const ExperimentSpec spec = load_spec_file(p.string());
    CHECK(spec.user_count == 5);
    CHECK(spec.sweep_step == 0.25);
    fs::remove(p);
    CHECK_THROWS_AS(load_spec_file("/nonexistent/mecfl.json"), ValidationError);
  }
}

TEST_SUITE("idx") {
  TEST_CASE("well-formed files load with scaled pixels") {
    const fs::path img = temp_file("ok-images", idx_images(kIdxImagesMagic, 3, 2, 2, 12));
    const fs::path lab = temp_file("ok-labels", idx_labels(kIdxLabelsMagic, 3, 3));
    const Dataset d = load_idx(img.string(), lab.string());
    CHECK(d.sample_count() == 3);
    CHECK(d.feature_count() == 4);
    CHECK(d.class_count() == 10);
    CHECK(d.row(0)[1] == doctest::Approx(1.0 / 255.0));
    CHECK(d.row(2)[3] == doctest::Approx(11.0 / 255.0));
    CHECK(d.label(2) == 2);
    fs::remove(img);
    fs::remove(lab);
  }

  TEST_CASE("wrong magic numbers") {
    const fs::path img = temp_file("magic-images", idx_images(0x00000802, 1, 1, 1, 1));
    const fs::path lab = temp_file("magic-labels", idx_labels(kIdxLabelsMagic, 1, 1));
    CHECK_THROWS_AS(load_idx(img.string(), lab.string()), BadMagic);
    CHECK_THROWS_AS(load_idx(lab.string(), img.string()), BadMagic);
    fs::remove(img);
    fs::remove(lab);
  }

  TEST_CASE("truncated pixel block reports the offset") {
    const fs::path img = temp_file("short-images", idx_images(kIdxImagesMagic, 2, 2, 2, 5));
    const fs::path lab = temp_file("short-labels", idx_labels(kIdxLabelsMagic, 2, 2));
    try {
      load_idx(img.string(), lab.string());
      FAIL("expected TruncatedFile");
    } catch (const TruncatedFile& e) {
      CHECK(e.offset() == 16 + 5);
    }
    fs::remove(img);
    fs::remove(lab);
  }

  TEST_CASE("truncated header") {
    const fs::path img = temp_file("header-images", std::string("\x00\x00\x08", 3));
    const fs::path lab = temp_file("header-labels", idx_labels(kIdxLabelsMagic, 1, 1));
    try {
      load_idx(img.string(), lab.string());
      FAIL("expected TruncatedFile");
    } catch (const TruncatedFile& e) {
      CHECK(e.offset() == 3);
    }
    fs::remove(img);
    fs::remove(lab);
  }

  TEST_CASE("image and label counts must agree") {
    const fs::path img = temp_file("count-images", idx_images(kIdxImagesMagic, 3, 1, 1, 3));
    const fs::path lab = temp_file("count-labels", idx_labels(kIdxLabelsMagic, 2, 2));
    CHECK_THROWS_AS(load_idx(img.string(), lab.string()), CountMismatch);
    fs::remove(img);
    fs::remove(lab);
  }
}

TEST_SUITE("population") {
  TEST_CASE("synthetic data is deterministic and non-empty") {
    CHECK_THROWS_AS(synthesize_dataset(0, 4, 3, 1), ValidationError);
    const Dataset a = synthesize_dataset(300, 6, 4, 21);
    CHECK(a == synthesize_dataset(300, 6, 4, 21));
    CHECK_FALSE(a == synthesize_dataset(300, 6, 4, 22));
    std::vector<std::size_t> per_class(4, 0);
    for (int y : a.labels()) ++per_class[static_cast<std::size_t>(y)];
    for (std::size_t c : per_class) CHECK(c == 75);
  }

  TEST_CASE("five-sigma clusters are learnable") {
    const Dataset train_set = synthesize_dataset(2000, 32, 10, 3);
    const Dataset test_set = synthesize_dataset(1000, 32, 10, 3 + 1000);
    TrainOptions opt;
    opt.epochs = 20;
    opt.learning_rate = 0.05;
    opt.batch_size = 10;
    const std::vector<double> w =
        train(std::vector<double>(weight_dim(32, 10), 0.0), train_set, opt, 5);
    CHECK(accuracy(w, test_set) > 0.95);
  }

  TEST_CASE("shards are near-equal and cover the pool") {
    const Dataset pool = synthesize_dataset(60000, 1, 2, 8);
    const std::vector<Dataset> shards = shard_dataset(pool, 50, 9);
    REQUIRE(shards.size() == 50);
    for (const Dataset& s : shards) CHECK(s.sample_count() == 1200);

    const std::vector<Dataset> uneven = shard_dataset(synthesize_dataset(10, 2, 2, 1), 3, 2);
    CHECK(uneven[0].sample_count() == 4);
    CHECK(uneven[1].sample_count() == 3);
    CHECK(uneven[2].sample_count() == 3);
  }

  TEST_CASE("a single user receives the whole training pool") {
    ExperimentSpec spec = small_spec();
    spec.user_count = 1;
    const Population pop = synthesize_users(spec);
    REQUIRE(pop.users.size() == 1);
    CHECK(pop.users[0].dataset_size == spec.samples_per_user);
    CHECK(pop.user_data[0].sample_count() == spec.samples_per_user);
  }

  TEST_CASE("users are drawn inside the configured ranges") {
    ExperimentSpec spec = small_spec(31);
    spec.user_count = 25;
    const Population pop = synthesize_users(spec);
    REQUIRE(pop.users.size() == 25);
    REQUIRE(pop.distances_m.size() == 25);
    for (std::size_t i = 0; i < pop.users.size(); ++i) {
      const UserProfile& u = pop.users[i];
      CHECK(u.id == i);
      CHECK(u.cpu_hz >= spec.cpu_hz_range.lo);
      CHECK(u.cpu_hz <= spec.cpu_hz_range.hi);
      CHECK(u.energy_budget_j >= spec.energy_budget_range.lo);
      CHECK(u.energy_budget_j <= spec.energy_budget_range.hi);
      CHECK(u.channel_gain == doctest::Approx(channel_gain_at(pop.distances_m[i], 0.0)).epsilon(1e-12));
      CHECK(u.transmit_power_w == spec.transmit_power_w);
      CHECK(u.dataset_size == pop.user_data[i].sample_count());
    }
    CHECK(pop.test_set.sample_count() == spec.test_samples);
    CHECK(synthesize_users(spec).users[3].cpu_hz == pop.users[3].cpu_hz);
  }

  TEST_CASE("path loss") {
    CHECK(channel_gain_at(10.0, 0.0) == doctest::Approx(1e-3));
    CHECK(channel_gain_at(100.0, 10.0) == doctest::Approx(1e-5));
  }

  TEST_CASE("cell tags split at the distance deciles") {
    std::vector<double> d;
    for (int k = 1; k <= 20; ++k) d.push_back(10.0 * k);
    const std::vector<CellTag> tags = cell_tags(d);
    CHECK(tags.front() == CellTag::kCenter);
    CHECK(tags[10] == CellTag::kMiddle);
    CHECK(tags.back() == CellTag::kEdge);
    std::size_t centre = 0;
    std::size_t edge = 0;
    for (CellTag t : tags) {
      centre += t == CellTag::kCenter;
      edge += t == CellTag::kEdge;
    }
    CHECK(centre == 2);
    CHECK(edge == 2);
  }
}

TEST_SUITE("sweep") {
  TEST_CASE("grid points") {
    const std::vector<double> g = sweep_grid(0.1);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[3] == 0.3);
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(g[k] > g[k - 1]);
    CHECK(sweep_grid(0.25).size() == 5);
    CHECK(sweep_grid(1.0).size() == 2);
  }

  TEST_CASE("offload sweep end points") {
    ExperimentSpec spec = small_spec(17);
    spec.scenario = Scenario::kSweepOffload;
    spec.sweep_step = 0.5;
    spec.sweep_rounds = 3;
    spec.threads = 2;
    const Population pop = synthesize_users(spec);
    const std::vector<SweepRow> rows = run_sweep(spec, pop);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].value == 0.0);
    CHECK(rows[1].value == 0.5);
    CHECK(rows[2].value == 1.0);
    CHECK(rows[2].t_local_train_max == 0.0);
    CHECK(rows[0].t_local_train_max > 0.0);

    const ExperimentResult baseline = run_traditional(pop, spec.system, 3, sweep_point_options(spec, 0.0));
    CHECK(rows[0].final_round.test_loss == baseline.trace.back().test_loss);
    CHECK(rows[0].final_round.t_total.value() == baseline.trace.back().t_total.value());
    CHECK(rows[0].final_round.t_edge.value() == 0.0);
  }

  TEST_CASE("sweep output does not depend on the thread count") {
    ExperimentSpec spec = small_spec(19);
    spec.scenario = Scenario::kSweepGamma;
    spec.sweep_step = 0.5;
    spec.sweep_rounds = 2;
    const Population pop = synthesize_users(spec);
    spec.threads = 1;
    const std::vector<SweepRow> one = run_sweep(spec, pop);
    spec.threads = 3;
    const std::vector<SweepRow> three = run_sweep(spec, pop);
    REQUIRE(one.size() == 2);
    REQUIRE(three.size() == one.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
      CHECK(one[k].value == three[k].value);
      CHECK(one[k].final_round.test_loss == three[k].final_round.test_loss);
    }
  }
}

TEST_SUITE("report") {
  TEST_CASE("numbers round-trip regardless of locale") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(0.30000000000000004)) == 0.30000000000000004);
    const char* previous = std::setlocale(LC_NUMERIC, nullptr);
    const std::string saved = previous ? previous : "C";
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") != nullptr) {
      CHECK(format_double(2.5) == "2.5");
    }
    std::setlocale(LC_NUMERIC, saved.c_str());
  }

  TEST_CASE("iteration CSV has a header and one row per iteration") {
    const ExperimentSpec spec = small_spec(23);
    const Population pop = synthesize_users(spec);
    RunOptions opt;
    opt.max_iterations = 3;
    const ExperimentResult r = run_proposed(pop, spec.system, opt);
    std::ostringstream out;
    write_iteration_csv(out, r.trace);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kIterationCsvHeader);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
    }
    CHECK(rows == r.trace.size());

    std::ostringstream trace;
    write_allocation_trace(trace, r.allocations);
    std::istringstream tin(trace.str());
    std::size_t k = 0;
    while (std::getline(tin, line)) {
      const nlohmann::json j = nlohmann::json::parse(line);
      CHECK(j.at("iteration").get<std::size_t>() == k + 1);
      CHECK(j.at("delta").size() == pop.users.size());
      CHECK(j.at("delta")[0].get<double>() == r.allocations[k].delta()[0]);
      ++k;
    }
    CHECK(k == r.allocations.size());
  }

  TEST_CASE("unwritable paths are reported") {
    CHECK_THROWS_AS(write_file("/nonexistent/dir/out.csv", "x"), ValidationError);
  }
}
