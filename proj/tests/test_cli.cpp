#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "urllc/config.hpp"
#include "urllc/runners.hpp"
#include "urllc/units.hpp"
#include "urllc/validation.hpp"

using namespace urllc;

TEST_CASE("unit conversions round-trip") {
  using namespace urllc::units;
  for (double dbm : {-174.0, -30.0, 0.0, 23.0}) {
    CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
  }
  for (double db : {-40.0, 0.0, 8.0, 34.1}) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
  }
  for (double ms : {0.1, 0.5, 10.0, 26.8}) {
    CHECK(slots_to_ms(ms_to_slots(ms, 0.1), 0.1) ==
          doctest::Approx(ms).epsilon(1e-12));
  }
}

TEST_CASE("default config carries the simulation parameters") {
  const auto cfg = config::default_config();
  const auto& sc = cfg.scenario;
  CHECK(sc.traffic.arrival_rate == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(sc.link.copy_duration == 5);
  CHECK(sc.link.payload_bits == 160);
  CHECK(sc.link.n_antennas == 32);
  CHECK(sc.link.tx_power == doctest::Approx(0.199526231496888).epsilon(1e-12));
  CHECK(sc.link.noise_psd ==
        doctest::Approx(3.9810717055349695e-21).epsilon(1e-12));
  CHECK(sc.delay_budget.d_core == 100.0);
  CHECK(sc.delay_budget.d_max == 0.0);
  CHECK(sc.link.large_scale_gain ==
        doctest::Approx(2.5480889304154625e-16).epsilon(1e-10));
  CHECK(sc.horizon_cap == 2000);
  CHECK(sc.state_model.slot_duration == doctest::Approx(1e-4).epsilon(1e-15));
  CHECK(cfg.sweep.variable == "horizon");
  CHECK(cfg.sweep.grid.front() == 10.0);
  CHECK(cfg.sweep.grid.back() == 150.0);
}

TEST_CASE("config parsing") {
  SUBCASE("overrides and grid expansion") {
    const auto cfg = config::parse_config(R"({
      "scenario": {
        "link": {"n_antennas": 64, "bandwidth_mhz": 0.88},
        "delay": {"d_max_ms": 5.0},
        "distance_m": 100.0
      },
      "sweep": {"variable": "d_max", "grid_ms": {"from": 0, "to": 4, "step": 2}},
      "rng_seed": 77,
      "workers": 3
    })");
    CHECK(cfg.scenario.link.n_antennas == 64);
    CHECK(cfg.scenario.link.bandwidth == doctest::Approx(0.88e6));
    CHECK(cfg.scenario.delay_budget.d_max == 50.0);
    CHECK(cfg.sweep.variable == "d_max");
    CHECK(cfg.sweep.grid == std::vector<Scalar>{0.0, 2.0, 4.0});
    CHECK(cfg.rng_seed == 77);
    CHECK(cfg.workers == 3);
    // distance override must flow into the link gain
    CHECK(cfg.scenario.link.large_scale_gain >
          config::default_config().scenario.link.large_scale_gain);
  }
  SUBCASE("unknown fields are named in the error") {
    CHECK_THROWS_WITH_AS(
        config::parse_config(R"({"scenario": {"link": {"antennas": 4}}})"),
        doctest::Contains("scenario.link.antennas"), std::runtime_error);
  }
  SUBCASE("malformed JSON is reported") {
    CHECK_THROWS_AS(config::parse_config("{"), std::runtime_error);
  }
  SUBCASE("bad sweep variable rejected") {
    CHECK_THROWS_WITH_AS(
        config::parse_config(R"({"sweep": {"variable": "power"}})"),
        doctest::Contains("sweep.variable"), std::runtime_error);
  }
}

TEST_CASE("shipped default config matches the built-in defaults") {
  const auto from_file =
      config::load_config(std::string(URLLC_SOURCE_DIR) + "/configs/default.json");
  const auto built_in = config::default_config();
  CHECK(from_file.scenario.traffic.arrival_rate ==
        built_in.scenario.traffic.arrival_rate);
  CHECK(from_file.scenario.link.large_scale_gain ==
        built_in.scenario.link.large_scale_gain);
  CHECK(from_file.scenario.link.bandwidth == built_in.scenario.link.bandwidth);
  CHECK(from_file.scenario.horizon_cap == built_in.scenario.horizon_cap);
  CHECK(from_file.scenario.delay_budget.d_core ==
        built_in.scenario.delay_budget.d_core);
  CHECK(from_file.sweep.grid == built_in.sweep.grid);
  CHECK(from_file.scenario.reliability_target.value() ==
        built_in.scenario.reliability_target.value());
}

TEST_CASE("result row invariants") {
  runners::ResultRow row;
  row.feasible = true;
  row.eps_prediction = 1e-6;
  row.eps_queue = 2e-6;
  row.eps_tx = 3e-6;
  row.eps_overall = 6e-6;
  CHECK_NOTHROW(runners::validate_row(row));
  row.eps_overall = 7e-6;
  CHECK_THROWS_AS(runners::validate_row(row), std::logic_error);
  row.eps_overall = 6e-6;
  row.eps_tx = 1.5;
  CHECK_THROWS_AS(runners::validate_row(row), std::logic_error);
}

TEST_CASE("horizon sweep output") {
  auto cfg = config::default_config();
  cfg.sweep.grid.clear();
  for (double ms = 10.0; ms <= 60.0; ms += 5.0) cfg.sweep.grid.push_back(ms);
  const std::string csv = runners::sweep_horizon_csv(cfg);
  SUBCASE("header and row count") {
    CHECK(csv.rfind("horizon_ms,status,eps_prediction", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(cfg.sweep.grid.size()) + 1);
  }
  SUBCASE("infeasible points are kept with a marker") {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);  // 10 ms: no room beyond the core-network delay
    CHECK(line.find("10,infeasible") == 0);
    std::getline(in, line);  // 15 ms is feasible
    CHECK(line.find("15,ok") == 0);
  }
  SUBCASE("byte determinism") {
    CHECK(csv == runners::sweep_horizon_csv(cfg));
  }
  SUBCASE("wrong sweep variable is rejected") {
    auto bad = cfg;
    bad.sweep.variable = "d_max";
    CHECK_THROWS_AS(runners::sweep_horizon_csv(bad), std::invalid_argument);
  }
}

TEST_CASE("tradeoff output") {
  auto cfg = config::default_config();
  cfg.sweep.variable = "d_max";
  cfg.sweep.grid = {0.0, 5.0, 9.0, 12.0, 20.0, 35.0};
  const std::string csv = runners::tradeoff_csv(cfg);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("series,d_max_ms,status", 0) == 0);
  long baseline_infeasible_below_core = 0;
  while (std::getline(in, line)) {
    if (line.rfind("baseline,", 0) == 0) {
      const double ms = std::stod(line.substr(9));
      const bool infeasible = line.find("infeasible") != std::string::npos;
      if (ms < 10.0) {
        CHECK(infeasible);
        ++baseline_infeasible_below_core;
      } else if (ms >= 12.0) {
        CHECK_FALSE(infeasible);
      }
    }
  }
  CHECK(baseline_infeasible_below_core == 3);
}

TEST_CASE("capacity output") {
  auto cfg = config::default_config();
  cfg.sweep.variable = "n_devices";
  cfg.capacity.mode = "worst_case";
  cfg.capacity.devices = {1, 2, 4};
  const std::string csv = runners::capacity_csv(cfg);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n_devices,total_bandwidth_hz,per_device_bandwidth_hz,status");
  std::vector<double> totals;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    totals.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  REQUIRE(totals.size() == 3);
  CHECK(totals[1] == 2.0 * totals[0]);
  CHECK(totals[2] == 4.0 * totals[0]);
}

TEST_CASE("validation report formatting and the tolerance sentinel") {
  SUBCASE("report lists names, grids, and failures; counts returned") {
    std::vector<validation::CheckResult> results;
    validation::CheckResult ok;
    ok.name = "sample_check";
    ok.grid = 42;
    ok.measured = 0.5;
    ok.bound = 1.0;
    ok.pass = true;
    validation::CheckResult bad = ok;
    bad.name = "failing_check";
    bad.pass = false;
    bad.note = "details";
    results.push_back(ok);
    results.push_back(bad);
    std::ostringstream out;
    CHECK(validation::write_report(results, out) == 1);
    CHECK(out.str().find("[PASS] sample_check (grid=42)") != std::string::npos);
    CHECK(out.str().find("[FAIL] failing_check") != std::string::npos);
    CHECK(out.str().find("# details") != std::string::npos);
  }
  SUBCASE("zeroed tolerances force failures") {
    CHECK_FALSE(validation::check_inverse_pair_identity(500, 1, 0.0).pass);
    CHECK_FALSE(validation::check_lambert_identity(0.0).pass);
    CHECK(validation::check_lambert_identity(1.0).pass);
  }
}
