#include "urllc/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "urllc/units.hpp"

namespace urllc::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::runtime_error("config: " + where + ": " + what);
}

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(where + "." + it.key(), "unknown field");
}

template <class T>
void read(const json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, e.what());
  }
}

std::vector<Scalar> read_grid(const json& j, const std::string& where) {
  std::vector<Scalar> grid;
  if (j.is_array()) {
    for (const auto& v : j) grid.push_back(v.get<Scalar>());
  } else if (j.is_object()) {
    check_keys(j, where, {"from", "to", "step"});
    const Scalar from = j.at("from").get<Scalar>();
    const Scalar to = j.at("to").get<Scalar>();
    const Scalar step = j.at("step").get<Scalar>();
    if (!(step > 0)) fail(where + ".step", "must be > 0");
    for (Scalar v = from; v <= to + 1e-9 * step; v += step) grid.push_back(v);
  } else {
    fail(where, "expected an array or {from,to,step}");
  }
  if (grid.empty()) fail(where, "empty grid");
  return grid;
}

// Human-unit scenario fields, converted once after all overrides are known.
struct RawScenario {
  Scalar slot_duration_ms = 0.1;
  Scalar accel_noise_std = 0.01;           // m/s^2 per slot
  std::vector<Scalar> thresholds = {0.1, 1e30, 1e30};
  std::vector<Scalar> initial_error_std = {0.01, 0.2, 0.1};
  Scalar arrival_rate_pps = 100.0;
  Scalar tx_power_dbm = 23.0;
  Scalar noise_psd_dbm_hz = -174.0;
  Scalar bandwidth_mhz = 0.44;
  Scalar snr_loss_db = 0.0;
  Scalar data_fraction = 1.0;
  int n_antennas = 32;
  int payload_bits = 160;
  Scalar copy_duration_ms = 0.5;
  Scalar d_max_ms = 0.0;
  Scalar core_network_ms = 10.0;
  Scalar decode_factor = 0.0;
  Scalar reliability_target = 1e-5;
  Scalar horizon_cap_ms = 200.0;
  Scalar bandwidth_cap_mhz = 20.0;
  int repetition_cap = 20;
  Scalar subcarrier_khz = 15.0;
};

ExperimentConfig assemble(const RawScenario& raw, const phy::PathLossModel& pl,
                          Scalar distance_m) {
  ExperimentConfig cfg;
  cfg.path_loss = pl;
  cfg.distance_m = distance_m;
  cfg.slot_duration_ms = raw.slot_duration_ms;

  const Scalar ts_s = raw.slot_duration_ms * 1e-3;
  Vec thr(3), init(3);
  for (int i = 0; i < 3; ++i) {
    thr[i] = raw.thresholds.at(i);
    init[i] = raw.initial_error_std.at(i);
  }
  auto& sc = cfg.scenario;
  sc.state_model = prediction::build_constant_accel_model(
      ts_s, raw.accel_noise_std, thr, init);
  sc.traffic.arrival_rate = raw.arrival_rate_pps * ts_s;

  sc.link.bandwidth = raw.bandwidth_mhz * 1e6;
  sc.link.tx_power = units::dbm_to_watts(raw.tx_power_dbm);
  sc.link.noise_psd = units::dbm_to_watts(raw.noise_psd_dbm_hz);
  sc.link.snr_loss = units::db_to_linear(raw.snr_loss_db);
  sc.link.data_fraction = raw.data_fraction;
  sc.link.n_antennas = raw.n_antennas;
  sc.link.payload_bits = raw.payload_bits;
  sc.link.slot_duration = ts_s;
  sc.link.copy_duration = static_cast<int>(
      std::lround(raw.copy_duration_ms / raw.slot_duration_ms));
  sc.link.large_scale_gain = phy::worst_case_gain(pl, distance_m);

  sc.delay_budget.d_max = units::ms_to_slots(raw.d_max_ms, raw.slot_duration_ms);
  sc.delay_budget.d_core =
      units::ms_to_slots(raw.core_network_ms, raw.slot_duration_ms);
  sc.delay_budget.decode_factor = raw.decode_factor;
  sc.reliability_target = Probability(raw.reliability_target);
  sc.horizon_cap = static_cast<int>(
      std::lround(units::ms_to_slots(raw.horizon_cap_ms, raw.slot_duration_ms)));
  sc.bandwidth_cap = raw.bandwidth_cap_mhz * 1e6;
  sc.repetition_cap = raw.repetition_cap;
  sc.subcarrier_hz = raw.subcarrier_khz * 1e3;
  sc.validate();
  return cfg;
}

}  // namespace

ExperimentConfig default_config() {
  RawScenario raw;
  phy::PathLossModel pl;
  ExperimentConfig cfg = assemble(raw, pl, 200.0);
  cfg.sweep.variable = "horizon";
  for (Scalar v = 10.0; v <= 150.0 + 1e-9; v += 5.0) cfg.sweep.grid.push_back(v);
  return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  check_keys(j, "", {"scenario", "sweep", "capacity", "validation", "rng_seed",
                     "workers", "output_path"});

  RawScenario raw;
  phy::PathLossModel pl;
  Scalar distance_m = 200.0;

  if (j.contains("scenario")) {
    const json& s = j["scenario"];
    check_keys(s, "scenario",
               {"slot_duration_ms", "state_model", "traffic", "link",
                "path_loss", "distance_m", "delay", "reliability_target",
                "caps"});
    read(s, "scenario", "slot_duration_ms", raw.slot_duration_ms);
    read(s, "scenario", "distance_m", distance_m);
    read(s, "scenario", "reliability_target", raw.reliability_target);
    if (s.contains("state_model")) {
      const json& m = s["state_model"];
      check_keys(m, "scenario.state_model",
                 {"accel_noise_std_mps2", "thresholds", "initial_error_std"});
      read(m, "scenario.state_model", "accel_noise_std_mps2",
           raw.accel_noise_std);
      read(m, "scenario.state_model", "thresholds", raw.thresholds);
      read(m, "scenario.state_model", "initial_error_std",
           raw.initial_error_std);
      if (raw.thresholds.size() != 3 || raw.initial_error_std.size() != 3)
        fail("scenario.state_model", "thresholds/initial_error_std need 3 entries");
    }
    if (s.contains("traffic")) {
      check_keys(s["traffic"], "scenario.traffic", {"arrival_rate_pps"});
      read(s["traffic"], "scenario.traffic", "arrival_rate_pps",
           raw.arrival_rate_pps);
    }
    if (s.contains("link")) {
      const json& l = s["link"];
      check_keys(l, "scenario.link",
                 {"tx_power_dbm", "noise_psd_dbm_hz", "bandwidth_mhz",
                  "snr_loss_db", "data_fraction", "n_antennas", "payload_bits",
                  "copy_duration_ms"});
      read(l, "scenario.link", "tx_power_dbm", raw.tx_power_dbm);
      read(l, "scenario.link", "noise_psd_dbm_hz", raw.noise_psd_dbm_hz);
      read(l, "scenario.link", "bandwidth_mhz", raw.bandwidth_mhz);
      read(l, "scenario.link", "snr_loss_db", raw.snr_loss_db);
      read(l, "scenario.link", "data_fraction", raw.data_fraction);
      read(l, "scenario.link", "n_antennas", raw.n_antennas);
      read(l, "scenario.link", "payload_bits", raw.payload_bits);
      read(l, "scenario.link", "copy_duration_ms", raw.copy_duration_ms);
    }
    if (s.contains("path_loss")) {
      const json& p = s["path_loss"];
      check_keys(p, "scenario.path_loss",
                 {"fixed_loss_db", "distance_exponent_db", "shadowing_std_db",
                  "availability_target"});
      read(p, "scenario.path_loss", "fixed_loss_db", pl.fixed_loss_db);
      read(p, "scenario.path_loss", "distance_exponent_db",
           pl.distance_exponent_db);
      read(p, "scenario.path_loss", "shadowing_std_db", pl.shadowing_std_db);
      if (p.contains("availability_target"))
        pl.availability_target =
            Probability(p.at("availability_target").get<Scalar>());
    }
    if (s.contains("delay")) {
      const json& d = s["delay"];
      check_keys(d, "scenario.delay",
                 {"d_max_ms", "core_network_ms", "decode_factor"});
      read(d, "scenario.delay", "d_max_ms", raw.d_max_ms);
      read(d, "scenario.delay", "core_network_ms", raw.core_network_ms);
      read(d, "scenario.delay", "decode_factor", raw.decode_factor);
    }
    if (s.contains("caps")) {
      const json& c = s["caps"];
      check_keys(c, "scenario.caps",
                 {"horizon_ms", "bandwidth_mhz", "repetitions", "subcarrier_khz"});
      read(c, "scenario.caps", "horizon_ms", raw.horizon_cap_ms);
      read(c, "scenario.caps", "bandwidth_mhz", raw.bandwidth_cap_mhz);
      read(c, "scenario.caps", "repetitions", raw.repetition_cap);
      read(c, "scenario.caps", "subcarrier_khz", raw.subcarrier_khz);
    }
  }

  ExperimentConfig cfg = assemble(raw, pl, distance_m);

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep", {"variable", "grid", "grid_ms"});
    read(s, "sweep", "variable", cfg.sweep.variable);
    static const std::set<std::string> kVars = {"horizon", "d_max", "n_devices",
                                                "bandwidth"};
    if (!kVars.count(cfg.sweep.variable))
      fail("sweep.variable", "must be one of horizon|d_max|n_devices|bandwidth");
    if (s.contains("grid_ms"))
      cfg.sweep.grid = read_grid(s["grid_ms"], "sweep.grid_ms");
    else if (s.contains("grid"))
      cfg.sweep.grid = read_grid(s["grid"], "sweep.grid");
  } else {
    cfg.sweep = default_config().sweep;
  }

  if (j.contains("capacity")) {
    const json& c = j["capacity"];
    check_keys(c, "capacity",
               {"mode", "devices", "total_bandwidth_mhz", "distance_range_m",
                "draws"});
    read(c, "capacity", "mode", cfg.capacity.mode);
    if (cfg.capacity.mode != "worst_case" &&
        cfg.capacity.mode != "known_distribution")
      fail("capacity.mode", "must be worst_case or known_distribution");
    read(c, "capacity", "devices", cfg.capacity.devices);
    if (c.contains("total_bandwidth_mhz"))
      cfg.capacity.total_bandwidth_hz =
          c.at("total_bandwidth_mhz").get<Scalar>() * 1e6;
    if (c.contains("distance_range_m")) {
      const auto r = c.at("distance_range_m").get<std::vector<Scalar>>();
      if (r.size() != 2 || !(r[0] <= r[1]))
        fail("capacity.distance_range_m", "expected [lo, hi]");
      cfg.capacity.distance_range_m = {r[0], r[1]};
    }
    read(c, "capacity", "draws", cfg.capacity.draws);
  }

  if (j.contains("validation")) {
    const json& v = j["validation"];
    check_keys(v, "validation", {"tolerance_scale", "quick"});
    read(v, "validation", "tolerance_scale", cfg.validation.tolerance_scale);
    read(v, "validation", "quick", cfg.validation.quick);
  }

  read(j, "", "rng_seed", cfg.rng_seed);
  read(j, "", "workers", cfg.workers);
  read(j, "", "output_path", cfg.output_path);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace urllc::config
