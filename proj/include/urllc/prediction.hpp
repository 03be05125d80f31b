#ifndef URLLC_PREDICTION_HPP_
#define URLLC_PREDICTION_HPP_

#include <cstdint>
#include <vector>

#include "urllc/types.hpp"

namespace urllc::prediction {

/// Linear state-transition system for one device: X(k+1) = Phi X(k) + W(k),
/// with independent zero-mean Gaussian transition noise per feature.
struct StateModel {
  Mat phi;                 // F x F state transition, per slot
  Vec process_noise_std;   // sigma_m >= 0, feature units per slot
  Vec initial_error_std;   // observation/filter residual at prediction start
  Vec thresholds;          // just-noticeable differences, > 0
  Scalar slot_duration = 0.0;  // seconds

  int n_features() const { return static_cast<int>(phi.rows()); }
  void validate() const;
};

/// Prediction-error summary at a fixed horizon.
struct PredictionErrorProfile {
  int horizon = 0;       // slots
  Vec per_feature_std;   // rho_j(horizon)
  Probability error_prob;
};

/// Result of the Monte Carlo trajectory oracle.
struct SimulationResult {
  Probability exceed_prob;  // fraction of trials with any |e_j| > delta_j
  Vec sample_std;           // empirical per-feature error std
};

/// Three-feature (location, velocity, acceleration) kinematic model with
/// process noise on the acceleration feature only.
StateModel build_constant_accel_model(Scalar slot_duration,
                                      Scalar accel_noise_std,
                                      const Vec& thresholds,
                                      const Vec& initial_error_std);

/// Per-feature standard deviation rho_j of the prediction error at the given
/// horizon: transition noise accumulated through powers of Phi plus the
/// propagated initial error. Horizon 0 returns initial_error_std.
Vec error_std_vector(const StateModel& model, int horizon);

/// rho_j for every horizon 0..horizon_max in one forward sweep; column T is
/// error_std_vector(model, T).
Mat error_std_table(const StateModel& model, int horizon_max);

/// Probability that any feature's prediction error magnitude exceeds its
/// threshold at the given horizon.
Probability prediction_error_prob(const StateModel& model, int horizon);

/// Same, evaluated from a precomputed rho vector.
Probability error_prob_from_std(const Vec& per_feature_std, const Vec& thresholds);

/// prediction_error_prob for every horizon 0..horizon_max.
std::vector<Scalar> prediction_error_curve(const StateModel& model,
                                           int horizon_max);

PredictionErrorProfile prediction_error_profile(const StateModel& model,
                                                int horizon);

/// Monte Carlo oracle: samples `trials` independent trajectories of the
/// state recursion, applies the linear predictor to the (noisily observed)
/// start state, and reports the empirical exceedance fraction. Deterministic
/// for fixed (seed, trials) regardless of worker count.
Probability simulate_prediction_error(const StateModel& model, int horizon,
                                      std::int64_t trials, std::uint64_t seed,
                                      int workers = 1);

SimulationResult simulate_prediction_detail(const StateModel& model, int horizon,
                                            std::int64_t trials,
                                            std::uint64_t seed, int workers = 1);

/// Trace-based evaluation: estimates velocity and acceleration of a position
/// series by finite differences, predicts each sample `horizon` slots ahead
/// with the constant-acceleration model, and returns the exceedance fraction.
Probability evaluate_trace(const std::vector<Scalar>& locations, int horizon,
                           Scalar threshold, Scalar slot_duration);

}  // namespace urllc::prediction

#endif  // URLLC_PREDICTION_HPP_
