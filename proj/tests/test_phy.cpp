#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "urllc/phy.hpp"
#include "urllc/specfun.hpp"

using namespace urllc;
using namespace urllc::phy;

namespace {

LinkModel table_iii_link() {
  LinkModel link;
  link.bandwidth = 440e3;
  link.tx_power = std::pow(10.0, (23.0 - 30.0) / 10.0);
  link.noise_psd = std::pow(10.0, (-174.0 - 30.0) / 10.0);
  link.large_scale_gain = 2.5480889304154625e-16;  // 200 m, worst-case shadowing
  link.snr_loss = 1.0;
  link.n_antennas = 32;
  link.data_fraction = 1.0;
  link.payload_bits = 160;
  link.slot_duration = 1e-4;
  link.copy_duration = 5;
  return link;
}

double snr_coefficient(const LinkModel& link) {
  return link.large_scale_gain * link.tx_power /
         (link.snr_loss * link.noise_psd * link.bandwidth);
}

// Test-side adaptive Simpson for the fading average of the conditional error.
double simpson(const std::function<double(double)>& f, double a, double b,
               double tol, int depth) {
  // Forced initial subdivision, as the Erlang-weighted integrand is peaked.
  std::function<double(double, double, double, double, double, double, int, int)>
      rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                double eps, int d, int force) -> double {
    const double mid = 0.5 * (lo + hi);
    const double l = 0.5 * (lo + mid), r = 0.5 * (mid + hi);
    const double fl = f(l), fr = f(r);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
    const double delta = left + right - whole;
    if (force <= 0 && (d <= 0 || std::abs(delta) <= 15.0 * eps))
      return left + right + delta / 15.0;
    return rec(lo, mid, flo, fl, fmid, 0.5 * eps, d - 1, force - 1) +
           rec(mid, hi, fmid, fr, fhi, 0.5 * eps, d - 1, force - 1);
  };
  const double m = 0.5 * (a + b);
  return rec(a, b, f(a), f(m), f(b), tol, depth, 8);
}

double quadrature_oracle(const LinkModel& link) {
  const int nr = link.n_antennas;
  const double lg = std::lgamma(static_cast<double>(nr));
  auto weighted = [&](double g) {
    if (g <= 0.0) return 0.0;
    return conditional_decoding_error(link, g).value() *
           std::exp((nr - 1) * std::log(g) - g - lg);
  };
  return simpson(weighted, 0.0, nr + 40.0 * std::sqrt(nr) + 120.0, 1e-13, 48);
}

// Lower regularized incomplete gamma for integer shape: Erlang CDF.
double erlang_cdf(int n, double x) {
  double tail = 0.0;
  for (int i = 0; i < n; ++i)
    tail += std::exp(i * std::log(x) - x - std::lgamma(i + 1.0));
  return 1.0 - tail;
}

// Independent evaluation of the linear-ramp fading average: the ramp falls
// from 1 at g_lo to 0 at g_hi, integrated exactly against Erlang(nr, 1) via
// CDF identities (g f_n(g) = n f_{n+1}(g)).
double ramp_integral_oracle(int nr, double g_lo, double g_hi) {
  const double width = g_hi - g_lo;
  const double mass = erlang_cdf(nr, g_hi) - erlang_cdf(nr, g_lo);
  const double mean_part =
      nr * (erlang_cdf(nr + 1, g_hi) - erlang_cdf(nr + 1, g_lo));
  return erlang_cdf(nr, g_lo) + (g_hi * mass - mean_part) / width;
}

}  // namespace

TEST_CASE("worst case gain") {
  PathLossModel model;
  SUBCASE("Table III point at 200 m") {
    // 35.3 + 37.6 log10(200) + 8 * Qinv(1e-5) dB, derived independently.
    CHECK(worst_case_gain(model, 200.0) ==
          doctest::Approx(2.5480889304154625e-16).epsilon(1e-10));
    CHECK(8.0 * specfun::q_inverse(model.availability_target) ==
          doctest::Approx(34.1191263513826).epsilon(1e-10));
  }
  SUBCASE("loss grows with distance") {
    CHECK(worst_case_gain(model, 200.0) < worst_case_gain(model, 50.0));
  }
  SUBCASE("median availability removes the shadowing term") {
    PathLossModel median = model;
    median.availability_target = Probability(0.5);
    const double plain =
        std::pow(10.0, -(35.3 + 37.6 * std::log10(120.0)) / 10.0);
    CHECK(worst_case_gain(median, 120.0) ==
          doctest::Approx(plain).epsilon(1e-14));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(worst_case_gain(model, 0.5), std::invalid_argument);
    PathLossModel bad = model;
    bad.availability_target = Probability(0.7);
    CHECK_THROWS_AS(worst_case_gain(bad, 100.0), std::invalid_argument);
  }
}

TEST_CASE("conditional decoding error") {
  const LinkModel link = table_iii_link();
  SUBCASE("zero gain cannot carry the payload") {
    CHECK(conditional_decoding_error(link, 0.0).value() == 1.0);
  }
  SUBCASE("one half at the rate-matching gain") {
    const double m = link.blocklength();
    const double theta = std::exp2(link.payload_bits / m) - 1.0;
    const double g_star = theta / snr_coefficient(link);
    CHECK(conditional_decoding_error(link, g_star).value() ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("strictly decreasing in the gain") {
    double prev = 1.1;
    for (double g = 1.0; g <= 120.0; g += 1.0) {
      const double e = conditional_decoding_error(link, g).value();
      CHECK(e <= prev);
      if (e > 1e-300 && prev < 1.0) CHECK(e < prev);
      prev = e;
    }
  }
  SUBCASE("shannon limit: error vanishes for large blocklength above threshold") {
    LinkModel big = link;
    const double m0 = link.blocklength();
    const double theta = std::exp2(link.payload_bits / m0) - 1.0;
    const double g_fixed = 2.0 * theta / snr_coefficient(link);
    double prev = 1.0;
    for (int scale : {1, 4, 16, 64}) {
      big.copy_duration = link.copy_duration * scale;
      big.payload_bits = link.payload_bits * scale;  // keep the rate fixed
      const double e = conditional_decoding_error(big, g_fixed).value();
      CHECK(e <= prev);
      prev = e;
    }
    CHECK(prev < 1e-12);
  }
}

TEST_CASE("expected decoding error (quadrature path)") {
  const LinkModel link = table_iii_link();
  SUBCASE("golden fixture against an independent integrator") {
    const double reference = quadrature_oracle(link);
    CHECK(reference == doctest::Approx(6.956415e-2).epsilon(1e-5));
    CHECK(expected_decoding_error(link).value() ==
          doctest::Approx(reference).epsilon(1e-7));
  }
  SUBCASE("channel hardening: monotone decrease in the antenna count") {
    double prev = 1.1;
    for (int nr : {1, 2, 4, 8, 16, 32, 64}) {
      LinkModel l = link;
      l.n_antennas = nr;
      const double e = expected_decoding_error(l).value();
      CHECK(e < prev);
      prev = e;
    }
  }
  SUBCASE("near-zero rate means near-zero loss") {
    LinkModel l = link;
    l.payload_bits = 1;
    CHECK(expected_decoding_error(l).value() < 1e-6);
  }
}

TEST_CASE("closed-form approximation") {
  const LinkModel link = table_iii_link();
  SUBCASE("matches the exact ramp integral") {
    // Recompute the interval from the definitions and integrate the ramp
    // independently; the closed form must agree to near machine precision.
    const double m = link.blocklength();
    const double rate = link.payload_bits / m;
    const double omega =
        1.0 / (2.0 * M_PI * std::sqrt(std::exp2(2.0 * rate) - 1.0));
    const double half = 1.0 / (2.0 * omega * std::sqrt(m));
    const double theta = std::exp2(rate) - 1.0;
    const double c = snr_coefficient(link);
    const double oracle =
        ramp_integral_oracle(link.n_antennas, (theta - half) / c,
                             (theta + half) / c);
    CHECK(expected_decoding_error_approx(link).value() ==
          doctest::Approx(oracle).epsilon(1e-11));
    // Interval width identity: g_hi - g_lo = 1 / (c omega sqrt(m)).
    CHECK((theta + half) / c - (theta - half) / c ==
          doctest::Approx(1.0 / (c * omega * std::sqrt(m))).epsilon(1e-12));
  }
  SUBCASE("frozen Table III value") {
    CHECK(expected_decoding_error_approx(link).value() ==
          doctest::Approx(0.12275990021152884).epsilon(1e-9));
  }
  SUBCASE("monotone decreasing over a 10 dB power sweep") {
    // Strict decrease is meaningful until the closed form reaches the
    // floating-point noise floor of its term differences.
    double prev = 1.1;
    for (double db = 0.0; db <= 10.0; db += 0.5) {
      LinkModel l = link;
      l.tx_power = link.tx_power * std::pow(10.0, db / 10.0);
      const double e = expected_decoding_error_approx(l).value();
      if (prev > 1e-12)
        CHECK(e < prev);
      else
        CHECK(e <= 1e-12);
      prev = e;
    }
  }
  SUBCASE("stays a probability across a wide gain range") {
    for (double scale = 1e-3; scale <= 1e3; scale *= 10.0) {
      LinkModel l = link;
      l.large_scale_gain = std::min(1.0, link.large_scale_gain * scale);
      const double e = expected_decoding_error_approx(l).value();
      CHECK(e >= 0.0);
      CHECK(e <= 1.0);
    }
  }
  SUBCASE("tiny payloads invalidate the linearized interval") {
    LinkModel l = table_iii_link();
    l.payload_bits = 16;
    l.bandwidth = 2e6;
    CHECK_THROWS_WITH_AS(static_cast<void>(expected_decoding_error_approx(l)),
                         doctest::Contains("zeta"), std::domain_error);
  }
}

TEST_CASE("repetition loss") {
  CHECK(repetition_loss(Probability(0.37), 1).value() == 0.37);
  CHECK(repetition_loss(Probability(0.1), 3).value() ==
        doctest::Approx(1e-3).epsilon(1e-12));
  double prev = 1.0;
  for (int k = 1; k <= 10; ++k) {
    const double e = repetition_loss(Probability(0.2), k).value();
    CHECK(e < prev);
    prev = e;
  }
  CHECK_THROWS_AS(repetition_loss(Probability(0.1), 0), std::domain_error);
}

TEST_CASE("link invariants") {
  LinkModel link = table_iii_link();
  link.bandwidth = 90e3;  // blocklength 45 < 50
  CHECK_THROWS_AS(link.validate(), std::invalid_argument);
  link = table_iii_link();
  link.payload_bits = 3000;  // above 10 bits/symbol
  CHECK_THROWS_AS(link.validate(), std::invalid_argument);
  link = table_iii_link();
  link.snr_loss = 0.5;
  CHECK_THROWS_AS(link.validate(), std::invalid_argument);
}
