#ifndef URLLC_VALIDATION_HPP_
#define URLLC_VALIDATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "urllc/config.hpp"

namespace urllc::validation {

/// Outcome of one named oracle or invariant check. `measured` is the worst
/// observed quantity, compared against `bound` (already scaled by the
/// configured tolerance factor).
struct CheckResult {
  std::string name;
  long grid = 0;       // number of evaluated points
  Scalar measured = 0.0;
  Scalar bound = 0.0;
  bool pass = false;
  std::string note;
};

/// Monte Carlo / search sizes, so the CLI can run a quick suite while the
/// acceptance binary runs the full-size criteria.
struct Sizes {
  std::int64_t prediction_trials = 10'000'000;
  std::int64_t queue_slots = 10'000'000;
  int inverse_pairs = 10'000;
  int prop2_random_scenarios = 10;
  int capacity_draws = 400;
  static Sizes full() { return Sizes{}; }
  static Sizes quick() { return Sizes{1'000'000, 2'000'000, 2'000, 4, 60}; }
};

// Closed-form / special-function oracles.
CheckResult check_inverse_pair_identity(int n_triples, std::uint64_t seed,
                                        Scalar scale);
CheckResult check_lambert_branch_selection(int n_triples, std::uint64_t seed);
CheckResult check_lambert_identity(Scalar scale);
CheckResult check_quadrature_normalization(Scalar scale);
CheckResult check_effective_bandwidth_value(Scalar scale);
CheckResult check_worst_case_gain(const config::ExperimentConfig& cfg,
                                  Scalar scale);
CheckResult check_random_walk_variance(Scalar scale);

// Lemmas and propositions.
CheckResult check_lemma1_prediction_monotone(const config::ExperimentConfig& cfg,
                                             std::uint64_t seed);
CheckResult check_lemma2_queue_monotone(std::uint64_t seed);
CheckResult check_lemma3_repetition();
CheckResult check_prop1_balanced_monotone(const config::ExperimentConfig& cfg);
CheckResult check_prop2_gap(const config::ExperimentConfig& cfg,
                            std::uint64_t seed, int n_random, Scalar scale);

// Approximation accuracy (Eq. 22 vs the quadrature reference).
CheckResult check_eq22_accuracy(const config::ExperimentConfig& cfg,
                                Scalar scale);
CheckResult check_eq22_direction(const config::ExperimentConfig& cfg);

// Monte Carlo oracles.
CheckResult check_prediction_mc(std::int64_t trials, std::uint64_t seed,
                                int workers, Scalar scale);
CheckResult check_prediction_mc_random_models(std::int64_t trials,
                                              std::uint64_t seed, int workers,
                                              Scalar scale);
CheckResult check_prediction_std_mc(std::uint64_t seed, int workers,
                                    Scalar scale);
CheckResult check_queueing_mc(std::int64_t n_slots, std::uint64_t seed,
                              Scalar scale);
CheckResult check_trace_consistency(std::uint64_t seed, Scalar scale);

// Experiment-level structure.
CheckResult check_fig3_u_shape(const config::ExperimentConfig& cfg);
CheckResult check_fig4_tradeoff(const config::ExperimentConfig& cfg);
CheckResult check_fig6_worst_case(const config::ExperimentConfig& cfg,
                                  Scalar scale);
CheckResult check_capacity_antenna_gain(const config::ExperimentConfig& cfg,
                                        int draws);
CheckResult check_split_balance(const config::ExperimentConfig& cfg,
                                std::uint64_t seed);
CheckResult check_min_bandwidth_postconditions(
    const config::ExperimentConfig& cfg, Scalar scale);
CheckResult check_additivity(const config::ExperimentConfig& cfg, Scalar scale);
CheckResult check_complexity(const config::ExperimentConfig& cfg, Scalar scale);
CheckResult check_determinism(const config::ExperimentConfig& cfg);

/// The full catalog, sized per cfg.validation.quick and scaled by
/// cfg.validation.tolerance_scale.
std::vector<CheckResult> run_all(const config::ExperimentConfig& cfg);

/// Streams one pass/fail line per check; returns the failure count.
int write_report(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace urllc::validation

#endif  // URLLC_VALIDATION_HPP_
