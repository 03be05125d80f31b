// Acceptance suite: runs every system-level criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exit status is the
// number of failed criteria (0 = all green).

#include <chrono>
#include <cstdio>
#include <iostream>
#include <vector>

#include "urllc/config.hpp"
#include "urllc/validation.hpp"

namespace {

int failures = 0;

void report(int number, const char* title,
            const std::vector<urllc::validation::CheckResult>& checks,
            double seconds) {
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", number,
              title, seconds);
  for (const auto& c : checks) {
    std::printf("         %s %s: grid=%ld measured=%.6g bound=%.6g%s%s\n",
                c.pass ? "ok  " : "FAIL", c.name.c_str(), c.grid, c.measured,
                c.bound, c.note.empty() ? "" : "  # ", c.note.c_str());
  }
  if (!pass) ++failures;
}

template <class Fn>
void criterion(int number, const char* title, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<urllc::validation::CheckResult> checks;
  try {
    checks = fn();
  } catch (const std::exception& e) {
    urllc::validation::CheckResult crash;
    crash.name = "exception";
    crash.pass = false;
    crash.note = e.what();
    checks.push_back(crash);
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(number, title, checks, dt);
}

}  // namespace

int main() {
  using namespace urllc;
  using validation::CheckResult;
  auto cfg = config::default_config();
  cfg.validation.quick = false;
  cfg.validation.tolerance_scale = 1.0;
  cfg.workers = 0;  // hardware concurrency; results are worker-invariant
  const std::uint64_t seed = cfg.rng_seed;

  std::printf("acceptance suite: Table III scenario, seed %llu\n",
              static_cast<unsigned long long>(seed));

  criterion(1, "effective-bandwidth / delay-violation inverse pair (1e-9 rel)",
            [&] {
              return std::vector<CheckResult>{
                  validation::check_inverse_pair_identity(10'000, seed, 1.0),
                  validation::check_lambert_branch_selection(10'000, seed)};
            });
  criterion(2, "prediction error nondecreasing in the horizon (6 models x 500)",
            [&] {
              return std::vector<CheckResult>{
                  validation::check_lemma1_prediction_monotone(cfg, seed)};
            });
  criterion(3, "queueing violation strictly decreasing in the delay bound",
            [&] {
              return std::vector<CheckResult>{
                  validation::check_lemma2_queue_monotone(seed)};
            });
  criterion(4, "repetition loss strictly decreasing in K", [&] {
    return std::vector<CheckResult>{validation::check_lemma3_repetition()};
  });
  criterion(5, "balanced max(eps_q, eps_t) nonincreasing in the horizon", [&] {
    return std::vector<CheckResult>{validation::check_prop1_balanced_monotone(cfg)};
  });
  criterion(6, "near-optimal gap below the optimum (exhaustive oracle)", [&] {
    return std::vector<CheckResult>{
        validation::check_prop2_gap(cfg, seed, 10, 1.0)};
  });
  criterion(7, "closed-form decoding error within 25% of quadrature", [&] {
    return std::vector<CheckResult>{validation::check_eq22_accuracy(cfg, 1.0),
                                    validation::check_eq22_direction(cfg)};
  });
  criterion(8, "prediction Monte Carlo within 3 binomial sigma (1e7 trials)",
            [&] {
              return std::vector<CheckResult>{validation::check_prediction_mc(
                  10'000'000, seed, cfg.workers, 1.0)};
            });
  criterion(9, "queueing simulation within twice the analytic value (1e7 slots)",
            [&] {
              return std::vector<CheckResult>{
                  validation::check_queueing_mc(10'000'000, seed, 1.0)};
            });
  criterion(10, "overall error U-shaped in the horizon with interior minimum",
            [&] {
              return std::vector<CheckResult>{validation::check_fig3_u_shape(cfg)};
            });
  criterion(11, "baseline infeasible below the core delay; co-design dominates",
            [&] {
              return std::vector<CheckResult>{validation::check_fig4_tradeoff(cfg)};
            });
  criterion(12, "worst-case capacity linear in N; 64 antennas save >= 50%", [&] {
    return std::vector<CheckResult>{validation::check_fig6_worst_case(cfg, 1.0)};
  });
  criterion(13, "bandwidth solve stays within the log-log evaluation budget",
            [&] {
              return std::vector<CheckResult>{validation::check_complexity(cfg, 1.0)};
            });
  criterion(14, "seeded operations byte-identical across worker counts", [&] {
    return std::vector<CheckResult>{validation::check_determinism(cfg)};
  });

  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
