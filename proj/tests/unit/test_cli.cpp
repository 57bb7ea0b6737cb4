#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "astra/cli/app.hpp"
#include "astra/cli/commands.hpp"
#include "astra/common/error.hpp"
#include "doctest.h"

using namespace astra;
using namespace astra::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = ASTRA_SOURCE_DIR;
const fs::path kGolden = kSource / "tests" / "golden";

ExperimentConfig load(const std::string& name, const std::vector<std::string>& overrides = {}) {
  auto kv = KeyValueConfig::load(kSource / "configs" / name);
  for (const auto& o : overrides) kv.apply_override(o);
  return ExperimentConfig::from(kv);
}

ExperimentConfig parse(const std::string& text) { return ExperimentConfig::from(KeyValueConfig::parse(text)); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ASTRA_UPDATE_GOLDEN=1 rewrites the file instead of comparing.
void check_golden(const std::string& file, const std::string& actual) {
  const auto path = kGolden / file;
  if (const char* u = std::getenv("ASTRA_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    fs::create_directories(kGolden);
    std::ofstream(path, std::ios::binary) << actual;
    MESSAGE("rewrote " << path.string());
    return;
  }
  REQUIRE_MESSAGE(fs::exists(path), "missing golden " << path.string() << "; run with ASTRA_UPDATE_GOLDEN=1");
  CHECK_MESSAGE(slurp(path) == actual, "golden mismatch: " << file);
}

double cell(const Table& t, std::size_t row, const std::string& column) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == column) return std::stod(t.rows.at(row).at(c));
  }
  FAIL("no column " << column);
  return 0.0;
}

std::string text_cell(const Table& t, std::size_t row, const std::string& column) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.columns[c] == column) return t.rows.at(row).at(c);
  }
  FAIL("no column " << column);
  return {};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "astra-sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("astra_cli_test_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct ThreadsEnv {
  explicit ThreadsEnv(const char* v) { setenv("ASTRA_SIM_THREADS", v, 1); }
  ~ThreadsEnv() { unsetenv("ASTRA_SIM_THREADS"); }
};

}  // namespace

TEST_CASE("golden outputs") {
  check_golden("scalability.csv", scalability(load("default.cfg")).to_csv());
  check_golden("energy-breakdown.csv", energy_breakdown(load("default.cfg")).to_csv());
  check_golden("latency_tiny.csv", latency(load("default.cfg")).to_csv());
  check_golden("latency_single_gemm.csv", latency(load("single_gemm.cfg")).to_csv());
  check_golden("multiply-sweep_grid.csv", multiply_sweep(load("multiply_grid.cfg")).to_csv());
  check_golden("baseline-compare.csv", baseline_compare(load("bert_base.cfg")).to_csv());
  check_golden("infer-compare_small.csv",
               infer_compare(load("default.cfg", {"infer.max_items=16", "infer.stream_lengths=64"})).to_csv());
}

TEST_CASE("tables start with a schema line") {
  const auto csv = latency(load("single_gemm.cfg")).to_csv();
  CHECK(csv.rfind("# schema=astra-sim/latency version=1\n", 0) == 0);
}

TEST_CASE("row counts") {
  const auto grid = load("multiply_grid.cfg");
  const auto m = multiply_sweep(grid);
  CHECK(m.rows.size() ==
        grid.multiply.values_x.size() * grid.multiply.stream_lengths.size() * grid.multiply.generators.size());

  const auto def = load("default.cfg");
  CHECK(scalability(def).rows.size() == def.scalability_lanes.size());
  CHECK(latency(def).rows.size() == def.workload.gemms.size() + 1);

  const auto small = load("default.cfg", {"infer.max_items=4", "infer.stream_lengths=32,64"});
  const auto ic = infer_compare(small);
  CHECK(ic.rows.size() == 2 + 2 * 2);
  CHECK(cell(ic, 0, "items") == 4);
  CHECK(cell(ic, 0, "mean_rel_error") == 0.0);
}

TEST_CASE("multiply sweep") {
  SUBCASE("exhaustive unary is exact for grid-aligned operands at N = 2^b") {
    const auto t = multiply_sweep(load("multiply_grid.cfg"));
    int checked = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (text_cell(t, r, "generator") != "exhaustive_unary" || cell(t, r, "n") != 256) continue;
      CHECK(cell(t, r, "mse") == 0.0);
      CHECK(cell(t, r, "mean_error") == 0.0);
      ++checked;
    }
    CHECK(checked == 5);
  }
  SUBCASE("LFSR at p = q = 0.5 shows binomial variance") {
    // Independent streams: each product bit is 1 with probability 1/4.
    const auto t = multiply_sweep(parse(
        "multiply.values_x = 0.5\nmultiply.values_w = 0.5\nmultiply.stream_lengths = 128\n"
        "multiply.generators = lfsr\nmultiply.trials = 256\n"));
    REQUIRE(t.rows.size() == 1);
    const double var = 0.25 * 0.75 / 128.0;
    const double sd_of_mse = std::sqrt(2.0 / 256.0) * var;
    CHECK(std::abs(cell(t, 0, "mse") - var) < 3.0 * sd_of_mse);
  }
  SUBCASE("explicit value lists must pair up") {
    CHECK_THROWS_AS(parse("multiply.values_x = 0.5, 0.25\nmultiply.values_w = 0.5\n"), ConfigError);
  }
}

TEST_CASE("scalability") {
  const auto t = scalability(load("default.cfg"));
  // Budget arithmetic is covered in the photonic tests; here only the CLI plumbing.
  CHECK(cell(t, 0, "lanes") == 1);
  CHECK(cell(t, 0, "required_laser_dbm") == doctest::Approx(-30.0103).epsilon(1e-6));
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    CHECK(cell(t, r, "required_laser_dbm") > cell(t, r - 1, "required_laser_dbm"));
    CHECK(cell(t, r, "feasible") <= cell(t, r - 1, "feasible"));
  }
  bool saw_feasible = false, saw_infeasible = false;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    (cell(t, r, "feasible") == 1 ? saw_feasible : saw_infeasible) = true;
  }
  CHECK(saw_feasible);
  CHECK(saw_infeasible);
}

TEST_CASE("energy breakdown") {
  const auto t = energy_breakdown(load("default.cfg"));
  double percent = 0.0, joules = 0.0;
  const std::size_t last = t.rows.size() - 1;
  CHECK(text_cell(t, last, "component") == "total");
  for (std::size_t r = 0; r < last; ++r) {
    CHECK(text_cell(t, r, "component").find("dac") == std::string::npos);
    CHECK(cell(t, r, "joules") >= 0.0);
    percent += cell(t, r, "percent");
    joules += cell(t, r, "joules");
  }
  CHECK(percent == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(joules == doctest::Approx(cell(t, last, "joules")).epsilon(1e-9));
}

TEST_CASE("latency") {
  SUBCASE("single GEMM") {
    const auto t = latency(load("single_gemm.cfg"));
    CHECK(cell(t, 1, "seconds") == doctest::Approx(8.6e-9).epsilon(1e-12));
  }
  SUBCASE("an empty workload costs nothing") {
    const auto t = latency(parse("workload.gemms =\n"));
    REQUIRE(t.rows.size() == 1);
    CHECK(cell(t, 0, "seconds") == 0.0);
  }
  SUBCASE("doubling engines halves the non-fill time") {
    const std::string base =
        "arch.wavelengths = 1\nvdpe.lanes = 512\nworkload.gemms = a:64:2048:64, b:32:512:128\n";
    const auto one = latency(parse(base + "arch.vdpe_count = 4\n"));
    const auto two = latency(parse(base + "arch.vdpe_count = 8\n"));
    // One fill pass of 129 slots per GEMM at 30 Gbps.
    const double fill = 2 * 129 / 30e9;
    const double t1 = cell(one, 2, "seconds"), t2 = cell(two, 2, "seconds");
    CHECK((t2 - fill) == doctest::Approx((t1 - fill) / 2).epsilon(1e-9));
  }
}

TEST_CASE("baseline compare needs a baseline") {
  CHECK_THROWS_AS(baseline_compare(load("default.cfg")), ConfigError);
  const auto t = baseline_compare(load("bert_base.cfg"));
  REQUIRE(t.rows.size() == 2);
  CHECK(cell(t, 1, "speedup_vs_baseline") == 1.0);
  CHECK(cell(t, 0, "speedup_vs_baseline") == doctest::Approx(cell(t, 1, "seconds") / cell(t, 0, "seconds")));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("sc.stream_lenght = 64\n"), ConfigError);
  CHECK_THROWS_AS(parse("sc.generator = sobolish\n"), ConfigError);
  CHECK_THROWS_AS(parse("workload.preset = tiny\nworkload.gemms = a:1:1:1\n"), ConfigError);
  CHECK_THROWS_AS(parse("workload.gemms = a:1:0:1\n"), ConfigError);
  CHECK_THROWS_AS(parse("vdpe.adc_bits = eight\n"), ConfigError);
  CHECK_THROWS_AS(parse("photonic.bitrate_gbps = nan\n"), ConfigError);
  for (const auto& k : known_keys()) CHECK(!k.empty());
}

TEST_CASE("exit codes") {
  TempDir tmp;
  const auto cfg = (kSource / "configs" / "single_gemm.cfg").string();
  CHECK(run_cli({"latency", "--config", cfg, "--out", tmp.path.string()}) == kExitOk);
  CHECK(fs::exists(tmp.path / "latency.csv"));

  CHECK(run_cli({"no-such-command", "--config", cfg}) == kExitConfig);
  CHECK(run_cli({"latency"}) == kExitConfig);
  CHECK(run_cli({"latency", "--config", cfg, "--set", "bogus.key=1"}) == kExitConfig);
  CHECK(run_cli({"latency", "--config", cfg, "--set", "vdpe.lanes=0"}) == kExitConfig);
  CHECK(run_cli({"baseline-compare", "--config", cfg, "--out", tmp.path.string()}) == kExitConfig);

  CHECK(run_cli({"latency", "--config", (tmp.path / "missing.cfg").string()}) == kExitIo);
  const auto blocker = tmp.path / "file";
  std::ofstream(blocker) << "x";
  CHECK(run_cli({"latency", "--config", cfg, "--out", (blocker / "sub").string()}) == kExitIo);
  CHECK(run_cli({"infer-compare", "--config", cfg, "--out", tmp.path.string(), "--set",
                 "infer.model=" + (tmp.path / "absent.astt").string()}) == kExitIo);
}

TEST_CASE("a missing fixture explains how to restore it") {
  TempDir tmp;
  try {
    infer_compare(load("default.cfg", {"infer.dataset=" + (tmp.path / "gone.astt").string()}));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("git checkout -- fixtures/") != std::string::npos);
  }
}

TEST_CASE("outputs do not depend on the thread count") {
  const auto cfg = load("default.cfg", {"infer.max_items=8", "infer.stream_lengths=32", "multiply.trials=32"});
  std::vector<std::string> serial, parallel;
  {
    ThreadsEnv env("1");
    serial = {multiply_sweep(cfg).to_csv(), infer_compare(cfg).to_csv()};
  }
  {
    ThreadsEnv env("4");
    parallel = {multiply_sweep(cfg).to_csv(), infer_compare(cfg).to_csv()};
  }
  CHECK(serial == parallel);
}
