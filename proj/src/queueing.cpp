#include "urllc/queueing.hpp"

#include <cmath>

#include "urllc/rng.hpp"
#include "urllc/specfun.hpp"

namespace urllc::queueing {

namespace {

// phi(lambda, E^B) with E^B = 1/D^t; always negative for a stable queue.
Scalar log_decay_rate(Scalar arrival_rate, Scalar service_interval) {
  const Scalar u = arrival_rate * service_interval;
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error(
        "queueing: unstable queue (arrival_rate * service_interval >= 1)");
  Scalar arg = -u * std::exp(-u);
  const Scalar branch = -std::exp(-1.0);
  if (arg < branch) arg = branch;  // guards FP rounding at u -> 1
  const Scalar w = specfun::lambert_w_m1(arg);
  return w / service_interval + arrival_rate;
}

}  // namespace

void QueueOperatingPoint::validate(const TrafficModel& traffic) const {
  traffic.validate();
  if (!(queue_delay_bound > 0) || !(service_interval > 0))
    throw std::invalid_argument("QueueOperatingPoint: delays must be > 0");
  if (violation_prob.value() < 1.0 &&
      !(traffic.arrival_rate * service_interval < 1.0))
    throw std::invalid_argument("QueueOperatingPoint: unstable queue");
  const Scalar eps = violation_prob.value();
  if (eps > 0.0 && eps < 1.0) {
    const Scalar eb =
        effective_bandwidth(traffic.arrival_rate, queue_delay_bound,
                            Probability(eps));
    const Scalar service_rate = 1.0 / service_interval;
    if (std::abs(eb - service_rate) > 1e-9 * service_rate)
      throw std::invalid_argument(
          "QueueOperatingPoint: effective-bandwidth relation violated");
  }
}

Scalar effective_bandwidth(Scalar arrival_rate, Scalar queue_delay_bound,
                           Probability violation_prob) {
  const Scalar eps = violation_prob.value();
  if (eps <= 0.0 || eps >= 1.0)
    throw std::domain_error("effective_bandwidth: violation_prob must be in (0,1)");
  if (!(arrival_rate > 0) || !(queue_delay_bound > 0))
    throw std::domain_error("effective_bandwidth: rate and bound must be > 0");
  const Scalar big_l = std::log(1.0 / eps);
  return big_l / (queue_delay_bound *
                  std::log(big_l / (arrival_rate * queue_delay_bound) + 1.0));
}

Probability delay_violation_prob(Scalar arrival_rate, Scalar queue_delay_bound,
                                 Scalar service_interval) {
  if (!(queue_delay_bound > 0))
    throw std::domain_error("delay_violation_prob: delay bound must be > 0");
  const Scalar phi = log_decay_rate(arrival_rate, service_interval);
  const Scalar exponent = queue_delay_bound * phi;
  if (exponent >= 0.0) return Probability(1.0);
  return Probability(std::exp(exponent));
}

Scalar required_queue_delay(Scalar arrival_rate, Scalar service_interval,
                            Probability violation_prob) {
  const Scalar eps = violation_prob.value();
  if (eps <= 0.0 || eps >= 1.0)
    throw std::domain_error("required_queue_delay: violation_prob must be in (0,1)");
  return std::log(eps) / log_decay_rate(arrival_rate, service_interval);
}

QueueOperatingPoint make_operating_point(const TrafficModel& traffic,
                                         Scalar queue_delay_bound,
                                         Scalar service_interval) {
  traffic.validate();
  QueueOperatingPoint p;
  p.queue_delay_bound = queue_delay_bound;
  p.service_interval = service_interval;
  p.violation_prob = delay_violation_prob(traffic.arrival_rate,
                                          queue_delay_bound, service_interval);
  return p;
}

Probability simulate_queue(Scalar arrival_rate, Scalar service_interval,
                           Scalar queue_delay_bound, std::int64_t n_slots,
                           std::uint64_t seed) {
  if (!(arrival_rate > 0) || !(arrival_rate * service_interval < 1.0))
    throw std::domain_error("simulate_queue: unstable queue");
  if (!(queue_delay_bound > 0))
    throw std::domain_error("simulate_queue: delay bound must be > 0");
  const Scalar warmup = 10.0 * queue_delay_bound;
  if (static_cast<Scalar>(n_slots) < warmup)
    throw std::domain_error("simulate_queue: n_slots must be >= 10 * D^q");

  rng::Xoshiro256 gen(seed, 0);
  Scalar server_free = 0.0;
  std::int64_t violations = 0, counted = 0;
  for (std::int64_t slot = 0; slot < n_slots; ++slot) {
    const int arrivals = gen.poisson(arrival_rate);
    for (int i = 0; i < arrivals; ++i) {
      const Scalar arrival = static_cast<Scalar>(slot);
      const Scalar start = std::max(arrival, server_free);
      server_free = start + service_interval;
      if (arrival >= warmup) {
        ++counted;
        if (start - arrival > queue_delay_bound) ++violations;
      }
    }
  }
  if (counted == 0) return Probability(0.0);
  return Probability(static_cast<Scalar>(violations) /
                     static_cast<Scalar>(counted));
}

}  // namespace urllc::queueing
