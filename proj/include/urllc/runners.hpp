#ifndef URLLC_RUNNERS_HPP_
#define URLLC_RUNNERS_HPP_

#include <ostream>
#include <string>

#include "urllc/config.hpp"

namespace urllc::runners {

/// One output row of a sweep experiment. Infeasible sweep points keep their
/// row with feasible=false and a reason note instead of being dropped.
struct ResultRow {
  Scalar sweep_value = 0.0;
  bool feasible = false;
  std::string note;
  Scalar eps_prediction = 0.0;
  Scalar eps_queue = 0.0;
  Scalar eps_tx = 0.0;
  Scalar eps_overall = 0.0;
  int horizon = 0;
  Scalar queue_delay = 0.0;
  Scalar tx_delay = 0.0;
  int repetitions = 0;
  Scalar bandwidth = 0.0;
};

/// Enforces the row invariants (all probabilities in [0,1]; the overall
/// error equals the clamped component sum to 1e-12). Throws on violation.
void validate_row(const ResultRow& row);

/// Fig. 3 style sweep: error components vs prediction horizon at fixed
/// bandwidth. Requires sweep.variable == "horizon".
std::string sweep_horizon_csv(const config::ExperimentConfig& cfg);

/// Fig. 4 style sweep: co-design vs no-prediction baseline over the
/// user-experienced delay bound. Requires sweep.variable == "d_max".
std::string tradeoff_csv(const config::ExperimentConfig& cfg);

/// Figs. 5-6 style capacity runs over the device count. Requires
/// sweep.variable == "n_devices"; the mode comes from cfg.capacity.
std::string capacity_csv(const config::ExperimentConfig& cfg);

/// Runs the oracle/invariant suite, streams one line per check, and returns
/// the number of failed checks.
int run_validation_report(const config::ExperimentConfig& cfg, std::ostream& out);

void write_file(const std::string& path, const std::string& content);

}  // namespace urllc::runners

#endif  // URLLC_RUNNERS_HPP_
