#ifndef URLLC_CODESIGN_HPP_
#define URLLC_CODESIGN_HPP_

#include <cstdint>
#include <utility>

#include "urllc/phy.hpp"
#include "urllc/prediction.hpp"
#include "urllc/queueing.hpp"
#include "urllc/types.hpp"

namespace urllc::codesign {

/// Default bandwidth-search granularity: one subcarrier.
inline constexpr Scalar kSubcarrierHz = 15e3;

/// User-experienced delay budget split, all in slots.
struct DelayBudget {
  Scalar d_max = 0.0;         // D_max: user-experienced delay requirement
  Scalar d_core = 0.0;        // D^r: backhaul and core-network delay
  Scalar decode_factor = 0.0; // kappa: decoding delay as a fraction of D^t
};

/// Full per-device problem instance. The link's bandwidth field is the
/// decision variable; solvers overwrite it.
struct DeviceScenario {
  prediction::StateModel state_model;
  queueing::TrafficModel traffic;
  phy::LinkModel link;
  DelayBudget delay_budget;
  Probability reliability_target;
  int horizon_cap = 0;        // T-bar^p, slots
  Scalar bandwidth_cap = 0.0; // B-bar, Hz
  int repetition_cap = 0;     // K-bar
  Scalar subcarrier_hz = kSubcarrierHz;
  void validate() const;
};

/// Delay split at one horizon: repetitions plus the implied queue/tx delays
/// and their error components.
struct SplitResult {
  int repetitions = 0;
  Scalar queue_delay = 0.0;  // slots
  Scalar tx_delay = 0.0;     // slots
  Probability eps_queue;
  Probability eps_tx;
};

/// Optimized operating point with all three error components.
struct CoDesignSolution {
  int horizon = 0;           // T^p, slots
  Scalar queue_delay = 0.0;  // D^q, slots
  Scalar tx_delay = 0.0;     // D^t = K * D^tau, slots
  int repetitions = 0;       // K
  Scalar bandwidth = 0.0;    // Hz
  Probability eps_prediction;
  Probability eps_queue;
  Probability eps_tx;
  Probability eps_overall;   // additive approximation, clamped to 1
};

/// Operation counters for the complexity checks.
struct SolveStats {
  long objective_evaluations = 0;
  long bandwidth_iterations = 0;
};

/// Splits the delay budget at a fixed horizon and bandwidth: scans the
/// repetition count K and returns the K minimizing max(eps^q, eps^t), the
/// discrete analogue of the eps^q = eps^t balance (ties go to the smaller K).
/// Throws InfeasibleError when no K fits the budget or stabilizes the queue.
SplitResult split_delay_budget(const DeviceScenario& scenario, int horizon,
                               Scalar bandwidth);

/// Near-optimal minimization of eps^q + eps^t + eps^p over the horizon at a
/// fixed bandwidth: binary search for the eps^p <= 2 eps^t crossing plus a
/// golden-section refinement of the unimodal objective; the best horizon
/// seen wins. Returns the solution (horizon included).
CoDesignSolution min_overall_error(const DeviceScenario& scenario,
                                   Scalar bandwidth,
                                   SolveStats* stats = nullptr);

/// Minimal bandwidth meeting the reliability target: bisection over
/// [subcarrier, bandwidth_cap] on the min_overall_error predicate, to one
/// subcarrier of resolution. Monotonicity of the objective in bandwidth is
/// asserted on the evaluations made during the run.
CoDesignSolution min_bandwidth(const DeviceScenario& scenario,
                               SolveStats* stats = nullptr);

/// Brute-force reference: full grid over horizon x repetitions without the
/// balance restriction or the crossing shortcut; returns the minimal
/// objective value.
Probability exhaustive_oracle(const DeviceScenario& scenario, Scalar bandwidth);

/// Empirical Pr{sum of per-device minimal bandwidths > b_total} with device
/// distances uniform in distance_range and shadowing sampled from the
/// path-loss model. Per-device infeasibility counts as exceedance.
/// Deterministic for fixed (seed, draws) regardless of worker count.
Probability capacity_known_distribution(const DeviceScenario& device_template,
                                        const phy::PathLossModel& path_loss,
                                        int n_devices, Scalar b_total,
                                        std::pair<Scalar, Scalar> distance_range,
                                        int draws, std::uint64_t seed,
                                        int workers = 1);

/// Total bandwidth for n identical devices at the worst-case gain
/// (farthest distance, worst-case shadowing): n times one min_bandwidth.
Scalar capacity_worst_case(const DeviceScenario& device_template,
                           const phy::PathLossModel& path_loss,
                           Scalar worst_distance, int n_devices);

}  // namespace urllc::codesign

#endif  // URLLC_CODESIGN_HPP_
