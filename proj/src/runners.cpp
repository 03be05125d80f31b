#include "urllc/runners.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "urllc/units.hpp"
#include "urllc/validation.hpp"

namespace urllc::runners {

namespace {

std::string fmt_prob(Scalar p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", p);
  return buf;
}

// Shortest representation that round-trips the exact double, so structural
// identities (e.g. linear capacity columns) survive the CSV.
std::string fmt_num(Scalar v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void append_row(std::ostringstream& out, const ResultRow& row) {
  validate_row(row);
  out << fmt_num(row.sweep_value) << ',';
  if (!row.feasible) {
    out << "infeasible,,,,,,,,,," << sanitize(row.note) << '\n';
    return;
  }
  out << "ok," << fmt_prob(row.eps_prediction) << ',' << fmt_prob(row.eps_queue)
      << ',' << fmt_prob(row.eps_tx) << ',' << fmt_prob(row.eps_overall) << ','
      << row.horizon << ',' << fmt_num(row.queue_delay) << ','
      << fmt_num(row.tx_delay) << ',' << row.repetitions << ','
      << fmt_num(row.bandwidth) << ",\n";
}

constexpr const char* kRowHeader =
    "eps_prediction,eps_queue,eps_tx,eps_overall,horizon_slots,"
    "queue_delay_slots,tx_delay_slots,repetitions,bandwidth_hz,note";

ResultRow feasible_row(Scalar sweep_value, const codesign::CoDesignSolution& sol) {
  ResultRow row;
  row.sweep_value = sweep_value;
  row.feasible = true;
  row.eps_prediction = sol.eps_prediction.value();
  row.eps_queue = sol.eps_queue.value();
  row.eps_tx = sol.eps_tx.value();
  row.eps_overall = sol.eps_overall.value();
  row.horizon = sol.horizon;
  row.queue_delay = sol.queue_delay;
  row.tx_delay = sol.tx_delay;
  row.repetitions = sol.repetitions;
  row.bandwidth = sol.bandwidth;
  return row;
}

ResultRow infeasible_row(Scalar sweep_value, const std::string& why) {
  ResultRow row;
  row.sweep_value = sweep_value;
  row.feasible = false;
  row.note = why;
  return row;
}

// Evaluates the fixed-bandwidth operating point at one forced horizon.
codesign::CoDesignSolution at_horizon(const codesign::DeviceScenario& sc,
                                      int horizon, Scalar eps_p) {
  const codesign::SplitResult split =
      codesign::split_delay_budget(sc, horizon, sc.link.bandwidth);
  codesign::CoDesignSolution sol;
  sol.horizon = horizon;
  sol.queue_delay = split.queue_delay;
  sol.tx_delay = split.tx_delay;
  sol.repetitions = split.repetitions;
  sol.bandwidth = sc.link.bandwidth;
  sol.eps_prediction = Probability(eps_p);
  sol.eps_queue = split.eps_queue;
  sol.eps_tx = split.eps_tx;
  sol.eps_overall = Probability::clamped(
      split.eps_queue.value() + split.eps_tx.value() + eps_p);
  return sol;
}

}  // namespace

void validate_row(const ResultRow& row) {
  if (!row.feasible) return;
  for (Scalar p : {row.eps_prediction, row.eps_queue, row.eps_tx, row.eps_overall})
    if (!(p >= 0.0 && p <= 1.0))
      throw std::logic_error("ResultRow: probability outside [0,1]");
  const Scalar sum =
      std::min<Scalar>(1.0, row.eps_prediction + row.eps_queue + row.eps_tx);
  if (std::abs(sum - row.eps_overall) > 1e-12)
    throw std::logic_error("ResultRow: eps_overall inconsistent with components");
}

std::string sweep_horizon_csv(const config::ExperimentConfig& cfg) {
  if (cfg.sweep.variable != "horizon")
    throw std::invalid_argument("sweep-horizon requires sweep.variable=horizon");
  const auto& sc = cfg.scenario;
  int t_max = 0;
  for (Scalar ms : cfg.sweep.grid)
    t_max = std::max(t_max, static_cast<int>(std::lround(
                                units::ms_to_slots(ms, cfg.slot_duration_ms))));
  const auto curve = prediction::prediction_error_curve(sc.state_model, t_max);

  std::ostringstream out;
  out << "horizon_ms,status," << kRowHeader << '\n';
  for (Scalar ms : cfg.sweep.grid) {
    const int t =
        static_cast<int>(std::lround(units::ms_to_slots(ms, cfg.slot_duration_ms)));
    try {
      append_row(out, feasible_row(ms, at_horizon(sc, t, curve[t])));
    } catch (const InfeasibleError& e) {
      append_row(out, infeasible_row(ms, e.what()));
    }
  }
  return out.str();
}

std::string tradeoff_csv(const config::ExperimentConfig& cfg) {
  if (cfg.sweep.variable != "d_max")
    throw std::invalid_argument("tradeoff requires sweep.variable=d_max");
  const auto curve0 =
      prediction::prediction_error_curve(cfg.scenario.state_model, 0);

  std::ostringstream out;
  out << "series,d_max_ms,status," << kRowHeader << '\n';
  for (Scalar ms : cfg.sweep.grid) {
    codesign::DeviceScenario sc = cfg.scenario;
    sc.delay_budget.d_max = units::ms_to_slots(ms, cfg.slot_duration_ms);
    out << "codesign,";
    try {
      append_row(out, feasible_row(
                          ms, codesign::min_overall_error(sc, sc.link.bandwidth)));
    } catch (const InfeasibleError& e) {
      append_row(out, infeasible_row(ms, e.what()));
    }
    out << "baseline,";
    try {
      append_row(out, feasible_row(ms, at_horizon(sc, 0, curve0[0])));
    } catch (const InfeasibleError& e) {
      append_row(out, infeasible_row(ms, e.what()));
    }
  }
  return out.str();
}

std::string capacity_csv(const config::ExperimentConfig& cfg) {
  if (cfg.sweep.variable != "n_devices")
    throw std::invalid_argument("capacity requires sweep.variable=n_devices");
  std::ostringstream out;
  if (cfg.capacity.mode == "worst_case") {
    out << "n_devices,total_bandwidth_hz,per_device_bandwidth_hz,status\n";
    for (int n : cfg.capacity.devices) {
      try {
        const Scalar total = codesign::capacity_worst_case(
            cfg.scenario, cfg.path_loss, cfg.distance_m, n);
        out << n << ',' << fmt_num(total) << ',' << fmt_num(total / n) << ",ok\n";
      } catch (const InfeasibleError& e) {
        out << n << ",,," << "infeasible: " << sanitize(e.what()) << '\n';
      }
    }
  } else {
    out << "n_devices,exceedance_prob,draws,seed,status\n";
    for (int n : cfg.capacity.devices) {
      const Probability p = codesign::capacity_known_distribution(
          cfg.scenario, cfg.path_loss, n, cfg.capacity.total_bandwidth_hz,
          cfg.capacity.distance_range_m, cfg.capacity.draws, cfg.rng_seed,
          cfg.workers);
      out << n << ',' << fmt_prob(p.value()) << ',' << cfg.capacity.draws << ','
          << cfg.rng_seed << ",ok\n";
    }
  }
  return out.str();
}

int run_validation_report(const config::ExperimentConfig& cfg,
                          std::ostream& out) {
  return validation::write_report(validation::run_all(cfg), out);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace urllc::runners
