#ifndef URLLC_QUEUEING_HPP_
#define URLLC_QUEUEING_HPP_

#include <cstdint>

#include "urllc/types.hpp"

namespace urllc::queueing {

/// Poisson packet arrivals of the current traffic state, in packets/slot.
struct TrafficModel {
  Scalar arrival_rate = 0.0;
  void validate() const {
    if (!(arrival_rate > 0))
      throw std::invalid_argument("TrafficModel: arrival_rate must be > 0");
  }
};

/// One admissible (D^q, D^t, eps^q) triple of the transmit queue.
struct QueueOperatingPoint {
  Scalar queue_delay_bound = 0.0;  // slots
  Scalar service_interval = 0.0;   // slots per packet (service rate 1/D^t)
  Probability violation_prob;

  /// Checks stability and the effective-bandwidth consistency relation
  /// against the given traffic model.
  void validate(const TrafficModel& traffic) const;
};

/// Effective bandwidth of a Poisson arrival process: the minimal constant
/// service rate (packets/slot) guaranteeing the delay bound at the target
/// violation probability.
Scalar effective_bandwidth(Scalar arrival_rate, Scalar queue_delay_bound,
                           Probability violation_prob);

/// Queueing-delay violation probability of the fixed-interval server,
/// exp{ D^q [ W_{-1}(-u e^{-u})/D^t + lambda ] } with u = lambda D^t.
/// Clamps to 1 when the exponent is nonnegative.
Probability delay_violation_prob(Scalar arrival_rate, Scalar queue_delay_bound,
                                 Scalar service_interval);

/// Queue delay bound (slots) needed to hit the target violation probability
/// with the given service interval.
Scalar required_queue_delay(Scalar arrival_rate, Scalar service_interval,
                            Probability violation_prob);

QueueOperatingPoint make_operating_point(const TrafficModel& traffic,
                                         Scalar queue_delay_bound,
                                         Scalar service_interval);

/// Discrete-event oracle: Poisson arrivals per slot, FCFS service of one
/// packet every service_interval slots; returns the fraction of packets
/// whose waiting time (arrival to start of service) exceeds the bound,
/// after a warm-up of 10 * queue_delay_bound slots.
Probability simulate_queue(Scalar arrival_rate, Scalar service_interval,
                           Scalar queue_delay_bound, std::int64_t n_slots,
                           std::uint64_t seed);

}  // namespace urllc::queueing

#endif  // URLLC_QUEUEING_HPP_
