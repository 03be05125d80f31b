#include "urllc/prediction.hpp"

#include <cmath>

#include "urllc/rng.hpp"
#include "urllc/specfun.hpp"

namespace urllc::prediction {

namespace {
constexpr std::int64_t kTrialsPerBlock = 1 << 14;
}

void StateModel::validate() const {
  const auto f = phi.rows();
  if (f == 0 || phi.cols() != f)
    throw std::invalid_argument("StateModel: phi must be square and non-empty");
  if (process_noise_std.size() != f || initial_error_std.size() != f ||
      thresholds.size() != f)
    throw std::invalid_argument("StateModel: vector sizes must match phi");
  if ((process_noise_std.array() < 0).any() ||
      (initial_error_std.array() < 0).any())
    throw std::invalid_argument("StateModel: standard deviations must be >= 0");
  if (!(thresholds.array() > 0).all())
    throw std::invalid_argument("StateModel: thresholds must be > 0");
  if (!(slot_duration > 0))
    throw std::invalid_argument("StateModel: slot_duration must be > 0");
}

StateModel build_constant_accel_model(Scalar slot_duration,
                                      Scalar accel_noise_std,
                                      const Vec& thresholds,
                                      const Vec& initial_error_std) {
  if (!(slot_duration > 0))
    throw std::domain_error("build_constant_accel_model: slot_duration must be > 0");
  if (!(accel_noise_std > 0))
    throw std::domain_error("build_constant_accel_model: accel_noise_std must be > 0");
  if (thresholds.size() != 3 || initial_error_std.size() != 3)
    throw std::invalid_argument("build_constant_accel_model: expected 3 features");
  StateModel m;
  const Scalar ts = slot_duration;
  m.phi.resize(3, 3);
  m.phi << 1.0, ts, 0.5 * ts * ts,
           0.0, 1.0, ts,
           0.0, 0.0, 1.0;
  m.process_noise_std = Vec::Zero(3);
  m.process_noise_std[2] = accel_noise_std;
  m.initial_error_std = initial_error_std;
  m.thresholds = thresholds;
  m.slot_duration = slot_duration;
  m.validate();
  return m;
}

Mat error_std_table(const StateModel& model, int horizon_max) {
  model.validate();
  if (horizon_max < 0)
    throw std::domain_error("error_std_table: horizon must be >= 0");
  const int f = model.n_features();
  const Vec noise_var = model.process_noise_std.array().square();
  const Vec init_var = model.initial_error_std.array().square();
  Mat table(f, horizon_max + 1);
  // Accumulate rho^2(T) = sum_{q=0}^{T-1} (Phi^q o Phi^q) sigma^2
  //                     + (Phi^T o Phi^T) sigma_0^2.
  Mat power = Mat::Identity(f, f);
  Vec noise_acc = Vec::Zero(f);
  for (int t = 0; t <= horizon_max; ++t) {
    const Vec init_term = power.array().square().matrix() * init_var;
    table.col(t) = (noise_acc + init_term).array().sqrt();
    noise_acc += power.array().square().matrix() * noise_var;
    power = model.phi * power;
  }
  return table;
}

Vec error_std_vector(const StateModel& model, int horizon) {
  return error_std_table(model, horizon).col(horizon);
}

Probability error_prob_from_std(const Vec& per_feature_std,
                                const Vec& thresholds) {
  // 1 - prod_j Pr{|e_j| <= delta_j}, Pr{|e_j| > delta_j} = 2 psi(-delta/rho);
  // rho == 0 contributes an exact factor of 1.
  Scalar log_ok = 0.0;
  for (int j = 0; j < per_feature_std.size(); ++j) {
    const Scalar rho = per_feature_std[j];
    if (rho <= 0.0) continue;
    const Scalar exceed =
        2.0 * specfun::std_normal_cdf(-thresholds[j] / rho).value();
    log_ok += std::log1p(-std::min(exceed, 1.0));
  }
  return Probability::clamped(-std::expm1(log_ok));
}

Probability prediction_error_prob(const StateModel& model, int horizon) {
  return error_prob_from_std(error_std_vector(model, horizon), model.thresholds);
}

std::vector<Scalar> prediction_error_curve(const StateModel& model,
                                           int horizon_max) {
  const Mat table = error_std_table(model, horizon_max);
  std::vector<Scalar> curve(horizon_max + 1);
  for (int t = 0; t <= horizon_max; ++t)
    curve[t] = error_prob_from_std(table.col(t), model.thresholds).value();
  return curve;
}

PredictionErrorProfile prediction_error_profile(const StateModel& model,
                                                int horizon) {
  PredictionErrorProfile p;
  p.horizon = horizon;
  p.per_feature_std = error_std_vector(model, horizon);
  p.error_prob = error_prob_from_std(p.per_feature_std, model.thresholds);
  return p;
}

SimulationResult simulate_prediction_detail(const StateModel& model, int horizon,
                                            std::int64_t trials,
                                            std::uint64_t seed, int workers) {
  model.validate();
  if (trials < 1)
    throw std::domain_error("simulate_prediction_error: trials must be >= 1");
  if (horizon < 0)
    throw std::domain_error("simulate_prediction_error: horizon must be >= 0");

  const int f = model.n_features();
  Mat phi_pow = Mat::Identity(f, f);
  for (int t = 0; t < horizon; ++t) phi_pow = model.phi * phi_pow;

  const std::size_t n_blocks =
      static_cast<std::size_t>((trials + kTrialsPerBlock - 1) / kTrialsPerBlock);
  std::vector<std::int64_t> block_exceed(n_blocks, 0);
  std::vector<Vec> block_sq(n_blocks, Vec::Zero(f));

  rng::parallel_for_blocks(n_blocks, workers, [&](std::size_t b) {
    rng::Xoshiro256 gen(seed, b);
    const std::int64_t lo = static_cast<std::int64_t>(b) * kTrialsPerBlock;
    const std::int64_t hi = std::min<std::int64_t>(lo + kTrialsPerBlock, trials);
    Vec state(f), next(f), observed(f), err(f);
    std::int64_t exceed = 0;
    Vec sq = Vec::Zero(f);
    for (std::int64_t n = lo; n < hi; ++n) {
      // True state starts at the origin; the observed start carries the
      // initial error. The predictor is linear, so the error statistics do
      // not depend on the true start state.
      for (int j = 0; j < f; ++j)
        observed[j] = model.initial_error_std[j] > 0.0
                          ? gen.normal() * model.initial_error_std[j]
                          : 0.0;
      state.setZero();
      for (int t = 0; t < horizon; ++t) {
        next.noalias() = model.phi * state;
        for (int j = 0; j < f; ++j)
          if (model.process_noise_std[j] > 0.0)
            next[j] += gen.normal() * model.process_noise_std[j];
        state.swap(next);
      }
      err.noalias() = state - phi_pow * observed;
      sq += err.array().square().matrix();
      bool any = false;
      for (int j = 0; j < f && !any; ++j)
        any = std::abs(err[j]) > model.thresholds[j];
      exceed += any ? 1 : 0;
    }
    block_exceed[b] = exceed;
    block_sq[b] = sq;
  });

  std::int64_t exceed = 0;
  Vec sq = Vec::Zero(f);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    exceed += block_exceed[b];
    sq += block_sq[b];
  }
  SimulationResult r;
  r.exceed_prob = Probability(static_cast<Scalar>(exceed) / trials);
  r.sample_std = (sq / static_cast<Scalar>(trials)).array().sqrt();
  return r;
}

Probability simulate_prediction_error(const StateModel& model, int horizon,
                                      std::int64_t trials, std::uint64_t seed,
                                      int workers) {
  return simulate_prediction_detail(model, horizon, trials, seed, workers)
      .exceed_prob;
}

Probability evaluate_trace(const std::vector<Scalar>& locations, int horizon,
                           Scalar threshold, Scalar slot_duration) {
  if (horizon < 0) throw std::domain_error("evaluate_trace: horizon must be >= 0");
  if (!(threshold > 0))
    throw std::domain_error("evaluate_trace: threshold must be > 0");
  if (!(slot_duration > 0))
    throw std::domain_error("evaluate_trace: slot duration must be > 0");
  const std::int64_t n = static_cast<std::int64_t>(locations.size());
  if (n <= horizon + 2)
    throw std::domain_error("evaluate_trace: series too short for this horizon");

  const Scalar ts = slot_duration;
  Mat phi(3, 3);
  phi << 1.0, ts, 0.5 * ts * ts, 0.0, 1.0, ts, 0.0, 0.0, 1.0;
  Mat phi_pow = Mat::Identity(3, 3);
  for (int t = 0; t < horizon; ++t) phi_pow = phi * phi_pow;
  const Vec predictor = phi_pow.row(0).transpose();

  // Central second-order stencils in the interior; second-order one-sided
  // stencils at the boundaries (exact for quadratic trajectories).
  auto velocity = [&](std::int64_t k) -> Scalar {
    if (k == 0)
      return (-3.0 * locations[0] + 4.0 * locations[1] - locations[2]) / (2.0 * ts);
    if (k == n - 1)
      return (3.0 * locations[n - 1] - 4.0 * locations[n - 2] + locations[n - 3]) /
             (2.0 * ts);
    return (locations[k + 1] - locations[k - 1]) / (2.0 * ts);
  };
  auto acceleration = [&](std::int64_t k) -> Scalar {
    const std::int64_t c = k == 0 ? 1 : (k == n - 1 ? n - 2 : k);
    return (locations[c + 1] - 2.0 * locations[c] + locations[c - 1]) / (ts * ts);
  };

  std::int64_t exceed = 0, total = 0;
  Vec state(3);
  for (std::int64_t k = 0; k + horizon < n; ++k) {
    state << locations[k], velocity(k), acceleration(k);
    const Scalar predicted = predictor.dot(state);
    if (std::abs(locations[k + horizon] - predicted) > threshold) ++exceed;
    ++total;
  }
  return Probability(static_cast<Scalar>(exceed) / static_cast<Scalar>(total));
}

}  // namespace urllc::prediction
