#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "urllc/config.hpp"
#include "urllc/prediction.hpp"
#include "urllc/runners.hpp"

namespace {

using urllc::config::ExperimentConfig;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::int64_t seed = -1;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
  cmd->add_option("--out", opts.out_path, "output file (overrides config)");
  cmd->add_option("--seed", opts.seed, "RNG seed (overrides config)");
  cmd->add_option("--workers", opts.workers,
                  "worker threads for seeded operations (0 = hardware)");
}

ExperimentConfig load(const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config_path.empty()
                             ? urllc::config::default_config()
                             : urllc::config::load_config(opts.config_path);
  if (opts.seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.workers >= 0) cfg.workers = opts.workers;
  if (!opts.out_path.empty()) cfg.output_path = opts.out_path;
  return cfg;
}

std::vector<double> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::vector<double> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    std::string field = comma == std::string::npos ? line : line.substr(0, comma);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str()) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::runtime_error("trace: non-numeric value: " + field);
    }
    first = false;
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prediction-and-communication co-design experiments"};
  app.require_subcommand(1);

  CommonOpts sweep_opts, tradeoff_opts, capacity_opts, validate_opts, trace_opts;
  auto* sweep = app.add_subcommand(
      "sweep-horizon", "error components vs prediction horizon at fixed bandwidth");
  add_common(sweep, sweep_opts);
  auto* tradeoff = app.add_subcommand(
      "tradeoff", "co-design vs no-prediction reliability over the delay bound");
  add_common(tradeoff, tradeoff_opts);
  auto* capacity =
      app.add_subcommand("capacity", "supported-device experiments (Figs. 5-6)");
  add_common(capacity, capacity_opts);
  auto* validate =
      app.add_subcommand("validate", "run the oracle and invariant suite");
  add_common(validate, validate_opts);

  auto* trace = app.add_subcommand(
      "eval-trace", "prediction-error rate of a recorded position trace");
  add_common(trace, trace_opts);
  std::string trace_path;
  double slot_ms = 1.0, threshold = 0.1;
  int horizon = 10;
  trace->add_option("--trace", trace_path, "single-column CSV of positions (m)")
      ->required();
  trace->add_option("--slot-ms", slot_ms, "slot spacing of the trace (ms)");
  trace->add_option("--horizon", horizon, "prediction horizon (slots)");
  trace->add_option("--threshold", threshold, "exceedance threshold (m)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      const auto cfg = load(sweep_opts);
      urllc::runners::write_file(cfg.output_path,
                                 urllc::runners::sweep_horizon_csv(cfg));
      std::cout << "wrote " << cfg.output_path << "\n";
    } else if (*tradeoff) {
      const auto cfg = load(tradeoff_opts);
      urllc::runners::write_file(cfg.output_path,
                                 urllc::runners::tradeoff_csv(cfg));
      std::cout << "wrote " << cfg.output_path << "\n";
    } else if (*capacity) {
      const auto cfg = load(capacity_opts);
      urllc::runners::write_file(cfg.output_path,
                                 urllc::runners::capacity_csv(cfg));
      std::cout << "wrote " << cfg.output_path << "\n";
    } else if (*validate) {
      const auto cfg = load(validate_opts);
      std::ostringstream report;
      const int failures = urllc::runners::run_validation_report(cfg, report);
      std::cout << report.str();
      if (!cfg.output_path.empty())
        urllc::runners::write_file(cfg.output_path, report.str());
      return failures == 0 ? 0 : 1;
    } else if (*trace) {
      const auto cfg = load(trace_opts);
      const auto positions = read_trace(trace_path);
      const auto p = urllc::prediction::evaluate_trace(
          positions, horizon, threshold, slot_ms * 1e-3);
      std::cout << "samples: " << positions.size()
                << "\nexceedance_probability: " << p.value() << "\n";
      if (!trace_opts.out_path.empty()) {
        std::ostringstream csv;
        csv << "horizon_slots,threshold_m,slot_ms,samples,exceedance_prob\n"
            << horizon << ',' << threshold << ',' << slot_ms << ','
            << positions.size() << ',' << p.value() << '\n';
        urllc::runners::write_file(trace_opts.out_path, csv.str());
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
