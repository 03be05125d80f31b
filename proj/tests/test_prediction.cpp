#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "urllc/prediction.hpp"
#include "urllc/specfun.hpp"

using namespace urllc;
using namespace urllc::prediction;

namespace {

StateModel table_iii_model() {
  Vec thr(3), init(3);
  thr << 0.1, 1e30, 1e30;
  init << 0.01, 0.2, 0.1;
  return build_constant_accel_model(1e-4, 0.01, thr, init);
}

}  // namespace

TEST_CASE("constant-acceleration model construction") {
  const StateModel m = table_iii_model();
  Mat expected(3, 3);
  expected << 1.0, 1e-4, 5e-9, 0.0, 1.0, 1e-4, 0.0, 0.0, 1.0;
  CHECK((m.phi - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.process_noise_std[0] == 0.0);
  CHECK(m.process_noise_std[1] == 0.0);
  CHECK(m.process_noise_std[2] == 0.01);
  CHECK(m.thresholds[0] == 0.1);
  CHECK_THROWS_AS(
      build_constant_accel_model(0.0, 0.01, m.thresholds, m.initial_error_std),
      std::domain_error);
}

TEST_CASE("error std vector closed form") {
  Vec thr(3);
  thr << 0.1, 1e30, 1e30;
  const StateModel m = build_constant_accel_model(1e-4, 0.01, thr, Vec::Zero(3));
  SUBCASE("horizon zero returns the initial error") {
    CHECK(error_std_vector(m, 0).isZero());
    const StateModel t3 = table_iii_model();
    const Vec rho0 = error_std_vector(t3, 0);
    CHECK(rho0[0] == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(rho0[1] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(rho0[2] == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("one step: noise reaches only the acceleration feature") {
    const Vec rho = error_std_vector(m, 1);
    CHECK(rho[0] == 0.0);
    CHECK(rho[1] == 0.0);
    CHECK(rho[2] == doctest::Approx(0.01).epsilon(1e-14));
  }
  SUBCASE("random walk variance is exactly T sigma^2") {
    StateModel w;
    w.phi = Mat::Identity(2, 2);
    w.process_noise_std = Vec(2);
    w.process_noise_std << 0.5, 0.25;
    w.initial_error_std = Vec::Zero(2);
    w.thresholds = Vec::Ones(2);
    w.slot_duration = 1.0;
    for (int t : {1, 5, 117, 1000}) {
      const Vec rho = error_std_vector(w, t);
      CHECK(rho[0] == std::sqrt(t * 0.25));
      CHECK(rho[1] == std::sqrt(t * 0.0625));
    }
  }
  SUBCASE("table matches per-horizon calls") {
    const StateModel t3 = table_iii_model();
    const Mat table = error_std_table(t3, 64);
    for (int t : {0, 1, 17, 64})
      CHECK((table.col(t) - error_std_vector(t3, t)).cwiseAbs().maxCoeff() ==
            0.0);
  }
}

TEST_CASE("prediction error probability") {
  Vec thr(3);
  thr << 1e30, 1e30, 0.1;
  const StateModel m = build_constant_accel_model(1e-4, 0.01, thr, Vec::Zero(3));
  SUBCASE("horizon zero with exact knowledge") {
    CHECK(prediction_error_prob(m, 0).value() == 0.0);
  }
  SUBCASE("one step, one active feature: two-sided 10-sigma tail") {
    // rho_accel(1) = 0.01, delta = 0.1: exceedance 2 psi(-10).
    const double expected = 1.523970604832099e-23;
    CHECK(prediction_error_prob(m, 1).value() ==
          doctest::Approx(expected).epsilon(1e-10));
    CHECK(prediction_error_prob(m, 1).value() ==
          doctest::Approx(2.0 * specfun::std_normal_cdf(-10.0).value())
              .epsilon(1e-13));
  }
  SUBCASE("monotone in the horizon") {
    const StateModel t3 = table_iii_model();
    CHECK(prediction_error_prob(t3, 10).value() <
          prediction_error_prob(t3, 100).value());
    const auto curve = prediction_error_curve(t3, 1200);
    for (std::size_t t = 1; t < curve.size(); ++t)
      CHECK(curve[t] >= curve[t - 1]);
    // Strict growth where the increments are macroscopic.
    CHECK(curve[900] > curve[850]);
  }
  SUBCASE("profile is self-consistent") {
    const auto profile = prediction_error_profile(table_iii_model(), 250);
    CHECK(profile.error_prob.value() ==
          doctest::Approx(
              error_prob_from_std(profile.per_feature_std,
                                  table_iii_model().thresholds)
                  .value())
              .epsilon(1e-12));
  }
}

TEST_CASE("monte carlo simulation") {
  SUBCASE("deterministic system is predicted exactly") {
    Vec thr(3);
    thr << 0.1, 0.1, 0.1;
    StateModel m = build_constant_accel_model(1e-4, 1.0, thr, Vec::Zero(3));
    m.process_noise_std.setZero();
    CHECK(simulate_prediction_error(m, 50, 1000, 7).value() == 0.0);
  }
  SUBCASE("agrees with the analytic tail at a moderate operating point") {
    // Single active feature, exceedance 2 psi(-z) targeted at 1e-2.
    Vec thr(3), init = Vec::Zero(3);
    const double z = specfun::q_inverse(Probability(5e-3));
    thr << 1e30, 1e30, 0.01 * std::sqrt(25.0) * z;
    const StateModel m = build_constant_accel_model(1e-4, 0.01, thr, init);
    const double analytic = prediction_error_prob(m, 25).value();
    CHECK(analytic == doctest::Approx(1e-2).epsilon(1e-6));
    const std::int64_t trials = 400'000;
    const double emp = simulate_prediction_error(m, 25, trials, 42).value();
    const double sigma = std::sqrt(analytic * (1 - analytic) / trials);
    CHECK(std::abs(emp - analytic) < 3 * sigma);
  }
  SUBCASE("sample stds track the analytic stds with initial error") {
    const StateModel t3 = table_iii_model();
    const auto sim = simulate_prediction_detail(t3, 30, 200'000, 11, 2);
    const Vec rho = error_std_vector(t3, 30);
    for (int j = 0; j < 3; ++j)
      CHECK(sim.sample_std[j] == doctest::Approx(rho[j]).epsilon(0.02));
  }
  SUBCASE("worker count does not change the result") {
    const StateModel t3 = table_iii_model();
    const auto a = simulate_prediction_detail(t3, 40, 100'000, 5, 1);
    const auto b = simulate_prediction_detail(t3, 40, 100'000, 5, 8);
    CHECK(a.exceed_prob.value() == b.exceed_prob.value());
    CHECK((a.sample_std - b.sample_std).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("trials must be positive") {
    CHECK_THROWS_AS(simulate_prediction_error(table_iii_model(), 1, 0, 1),
                    std::domain_error);
  }
}

TEST_CASE("trace evaluation") {
  SUBCASE("device at rest never exceeds") {
    std::vector<double> flat(500, 3.25);
    CHECK(evaluate_trace(flat, 20, 1e-6, 1e-3).value() == 0.0);
  }
  SUBCASE("exact quadratic trajectory is predicted exactly") {
    const double a = 2.7, ts = 1e-3;
    std::vector<double> trace(400);
    for (std::size_t k = 0; k < trace.size(); ++k)
      trace[k] = 0.5 * a * (k * ts) * (k * ts);
    CHECK(evaluate_trace(trace, 50, 1e-9, ts).value() == 0.0);
  }
  SUBCASE("series too short") {
    std::vector<double> tiny(10, 0.0);
    CHECK_THROWS_AS(evaluate_trace(tiny, 8, 0.1, 1e-3), std::domain_error);
  }
}
