#ifndef URLLC_CONFIG_HPP_
#define URLLC_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "urllc/codesign.hpp"
#include "urllc/phy.hpp"

namespace urllc::config {

/// Sweep definition over one experiment variable.
struct SweepConfig {
  std::string variable;       // horizon | d_max | n_devices | bandwidth
  std::vector<Scalar> grid;   // ms for horizon/d_max, MHz for bandwidth
};

struct CapacityConfig {
  std::string mode = "worst_case";  // worst_case | known_distribution
  std::vector<int> devices = {1, 2, 4, 8, 16};
  Scalar total_bandwidth_hz = 1e6;
  std::pair<Scalar, Scalar> distance_range_m = {50.0, 200.0};
  int draws = 200;
};

struct ValidationConfig {
  Scalar tolerance_scale = 1.0;
  bool quick = true;
};

/// One experiment: a fully converted device scenario plus the sweep and
/// run options. All values are in internal units (slots, linear gains,
/// watts); conversion from the human-unit file happens once at load time.
struct ExperimentConfig {
  codesign::DeviceScenario scenario;
  phy::PathLossModel path_loss;
  Scalar distance_m = 200.0;
  Scalar slot_duration_ms = 0.1;
  SweepConfig sweep;
  CapacityConfig capacity;
  ValidationConfig validation;
  std::uint64_t rng_seed = 1;
  int workers = 1;
  std::string output_path = "results.csv";
};

/// Table III scenario with the documented defaults.
ExperimentConfig default_config();

/// Parses the JSON experiment file; unknown fields are rejected, missing
/// fields fall back to the defaults. Errors name the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace urllc::config

#endif  // URLLC_CONFIG_HPP_
