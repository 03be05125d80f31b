#ifndef URLLC_PHY_HPP_
#define URLLC_PHY_HPP_

#include "urllc/types.hpp"

namespace urllc::phy {

/// Radio link of one device over a quasi-static SIMO Rayleigh channel.
struct LinkModel {
  Scalar bandwidth = 0.0;        // Hz
  Scalar tx_power = 0.0;         // watts
  Scalar noise_psd = 0.0;        // watts/Hz
  Scalar large_scale_gain = 0.0; // linear, <= 1
  Scalar snr_loss = 1.0;         // linear, >= 1 (channel-estimation penalty)
  int n_antennas = 1;
  Scalar data_fraction = 1.0;    // fraction of resources carrying data, (0,1]
  int payload_bits = 0;          // bits per block
  Scalar slot_duration = 0.0;    // seconds
  int copy_duration = 1;         // slots per repetition copy

  /// Channel-code blocklength in symbols.
  Scalar blocklength() const {
    return data_fraction * copy_duration * slot_duration * bandwidth;
  }
  void validate() const;
};

/// Deterministic part of the large-scale channel model plus the shadowing
/// quantile used for worst-case link budgets.
struct PathLossModel {
  Scalar fixed_loss_db = 35.3;
  Scalar distance_exponent_db = 37.6;  // dB per decade of distance
  Scalar shadowing_std_db = 8.0;
  Probability availability_target = Probability(1e-5);
  void validate() const;
};

/// Large-scale gain at the availability quantile of the shadowing
/// distribution: Pr{gain <= result} = availability_target.
Scalar worst_case_gain(const PathLossModel& model, Scalar distance);

/// Large-scale gain for an explicit shadowing sample (dB, gain-reducing
/// when positive).
Scalar gain_with_shadowing(const PathLossModel& model, Scalar distance,
                           Scalar shadowing_db);

/// Decoding error of one copy conditioned on the instantaneous channel gain
/// sample, from the finite-blocklength normal approximation.
Probability conditional_decoding_error(const LinkModel& link, Scalar gain_sample);

/// Expected decoding error over the Erlang(N_r) fading distribution;
/// quadrature reference path.
Probability expected_decoding_error(const LinkModel& link);

/// Closed-form approximation of the fading-averaged decoding error (linear
/// ramp integrated exactly against the Erlang density). Clamped to [0,1].
Probability expected_decoding_error_approx(const LinkModel& link);

/// Packet loss after k independent repetitions.
Probability repetition_loss(Probability per_copy_error, int k);

}  // namespace urllc::phy

#endif  // URLLC_PHY_HPP_
