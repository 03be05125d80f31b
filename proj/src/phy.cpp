#include "urllc/phy.hpp"

#include <atomic>
#include <cmath>
#include <iostream>

#include "urllc/specfun.hpp"

namespace urllc::phy {

namespace {
constexpr Scalar kLn2 = 0.69314718055994530942;

Scalar snr_per_unit_gain(const LinkModel& link) {
  return link.large_scale_gain * link.tx_power /
         (link.snr_loss * link.noise_psd * link.bandwidth);
}

void warn_clamped_once() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true))
    std::cerr << "urllc: closed-form decoding error exceeded 1; clamped"
              << std::endl;
}

}  // namespace

void LinkModel::validate() const {
  if (!(bandwidth > 0) || !(tx_power > 0) || !(noise_psd > 0))
    throw std::invalid_argument("LinkModel: bandwidth/power/noise must be > 0");
  if (!(large_scale_gain > 0) || large_scale_gain > 1.0)
    throw std::invalid_argument("LinkModel: large_scale_gain must be in (0,1]");
  if (!(snr_loss >= 1.0))
    throw std::invalid_argument("LinkModel: snr_loss must be >= 1");
  if (n_antennas < 1)
    throw std::invalid_argument("LinkModel: n_antennas must be >= 1");
  if (!(data_fraction > 0) || data_fraction > 1.0)
    throw std::invalid_argument("LinkModel: data_fraction must be in (0,1]");
  if (payload_bits < 1)
    throw std::invalid_argument("LinkModel: payload_bits must be >= 1");
  if (!(slot_duration > 0) || copy_duration < 1)
    throw std::invalid_argument("LinkModel: slot/copy durations must be > 0");
  const Scalar m = blocklength();
  if (m < 50.0)
    throw std::invalid_argument(
        "LinkModel: blocklength below the 50-symbol normal-approximation floor");
  if (m < payload_bits / 10.0)
    throw std::invalid_argument(
        "LinkModel: rate above 10 bits/symbol (blocklength too small)");
}

void PathLossModel::validate() const {
  if (!(fixed_loss_db > 0) || !(distance_exponent_db > 0) ||
      !(shadowing_std_db > 0))
    throw std::invalid_argument("PathLossModel: fields must be > 0");
  if (availability_target.value() > 0.5)
    throw std::invalid_argument(
        "PathLossModel: availability_target must be <= 0.5");
}

Scalar gain_with_shadowing(const PathLossModel& model, Scalar distance,
                           Scalar shadowing_db) {
  model.validate();
  if (!(distance >= 1.0))
    throw std::invalid_argument("path loss model: distance must be >= 1 m");
  const Scalar loss_db = model.fixed_loss_db +
                         model.distance_exponent_db * std::log10(distance) +
                         shadowing_db;
  return std::pow(10.0, -loss_db / 10.0);
}

Scalar worst_case_gain(const PathLossModel& model, Scalar distance) {
  model.validate();
  const Scalar quantile =
      model.availability_target.value() == 0.5
          ? 0.0
          : specfun::q_inverse(model.availability_target);
  return gain_with_shadowing(model, distance, model.shadowing_std_db * quantile);
}

Probability conditional_decoding_error(const LinkModel& link, Scalar gain_sample) {
  if (gain_sample < 0)
    throw std::domain_error("conditional_decoding_error: gain must be >= 0");
  const Scalar gamma = snr_per_unit_gain(link) * gain_sample;
  if (gamma <= 0.0) return Probability(1.0);
  const Scalar m = link.blocklength();
  // V = 1 - (1+gamma)^-2, in the cancellation-free form.
  const Scalar onep = 1.0 + gamma;
  const Scalar v = gamma * (2.0 + gamma) / (onep * onep);
  if (v <= 0.0) return Probability(1.0);
  const Scalar arg =
      std::sqrt(m / v) * (std::log1p(gamma) - link.payload_bits * kLn2 / m);
  return specfun::std_normal_q(arg);
}

Probability expected_decoding_error(const LinkModel& link) {
  link.validate();
  return Probability::clamped(specfun::fading_expectation(
      [&link](Scalar g) { return conditional_decoding_error(link, g).value(); },
      link.n_antennas));
}

Probability expected_decoding_error_approx(const LinkModel& link) {
  link.validate();
  const Scalar m = link.blocklength();
  const Scalar rate = link.payload_bits / m;
  const Scalar omega =
      1.0 / (2.0 * M_PI * std::sqrt(std::exp2(2.0 * rate) - 1.0));
  const Scalar theta = std::exp2(rate) - 1.0;
  const Scalar half_width = 1.0 / (2.0 * omega * std::sqrt(m));
  const Scalar xi = theta + half_width;
  const Scalar zeta = theta - half_width;
  if (zeta <= 0.0)
    throw std::domain_error(
        "expected_decoding_error_approx: zeta = theta - 1/(2 omega sqrt(m)) <= 0 "
        "(blocklength too small for the linearized interval)");
  const Scalar c = snr_per_unit_gain(link);
  const Scalar g_hi = xi / c;
  const Scalar g_lo = zeta / c;
  const int nr = link.n_antennas;
  Scalar sum = 0.0;
  for (int i = 0; i <= nr; ++i) {
    const Scalar lgi = std::lgamma(static_cast<Scalar>(i) + 1.0);
    const Scalar a_i = std::exp(i * std::log(g_lo) - g_lo - lgi) -
                       std::exp(i * std::log(g_hi) - g_hi - lgi);
    sum += (nr - i) * a_i;
  }
  const Scalar value = omega * c * std::sqrt(m) * ((g_hi - g_lo) - sum);
  if (value > 1.0) warn_clamped_once();
  return Probability::clamped(value);
}

Probability repetition_loss(Probability per_copy_error, int k) {
  if (k < 1) throw std::domain_error("repetition_loss: k must be >= 1");
  return Probability(std::pow(per_copy_error.value(), k));
}

}  // namespace urllc::phy
