#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hvacsim/config.hpp"
#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"
#include "hvacsim/harness.hpp"

namespace hvacsim::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
};

struct ConditionArgs {
  std::string strategy;
  std::string bounds;
  std::optional<double> fp;
  std::optional<double> fn;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig load_experiment(const Common& common, std::optional<std::uint64_t> synth_seed = std::nullopt) {
  config::Config cfg;
  if (!common.config_path.empty()) cfg = config::Config::load(common.config_path);
  for (const auto& o : common.overrides) cfg.set(o);
  if (synth_seed) cfg.set("scenario.synth_seed=" + std::to_string(*synth_seed));
  return ExperimentConfig::from(cfg);
}

ConditionSpec condition_from(const ConditionArgs& a) {
  ConditionSpec c;
  try {
    c.kind = parse_strategy(a.strategy);
    bounds_by_name(a.bounds);
  } catch (const Error& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  c.bounds = a.bounds;
  if (c.kind == StrategyKind::Predictive) {
    if (!a.fp || !a.fn) throw Error(ErrorKind::ConfigError, "predictive runs need --fp and --fn");
    if (!a.seed) throw Error(ErrorKind::ConfigError, "predictive runs need --seed");
    c.fp_rate = a.fp;
    c.fn_rate = a.fn;
  }
  c.seed = a.seed.value_or(0);
  return c;
}

void add_condition_options(CLI::App* app, ConditionArgs& a) {
  app->add_option("--strategy", a.strategy, "predictive | reactive | static | always_on")->required();
  app->add_option("--bounds", a.bounds, "small | medium | large")->required();
  app->add_option("--fp", a.fp, "target false-positive rate (predictive)");
  app->add_option("--fn", a.fn, "target false-negative rate (predictive)");
  app->add_option("--seed", a.seed, "seed for prediction errors (required for predictive)");
}

std::vector<SlotWeights> weights_for(const Scenario& sc) {
  std::vector<SlotWeights> w;
  for (const auto& tr : sc.traces) w.push_back(compute_slot_weights(tr));
  return w;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy/comfort tradeoffs of occupancy-driven HVAC control"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "key/value configuration file");
  app.add_option("--set", common.overrides, "override a config entry, e.g. --set sweep.bounds=[\"small\"]");

  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "generate synthetic occupancy.csv and weather.csv");
  synth->add_option("--seed", synth_seed, "data seed")->required();
  synth->add_option("--out", synth_out, "output directory")->required();

  ConditionArgs sim_args;
  std::string sim_out;
  bool dump_traces = false;
  bool dump_predictions = false;
  bool dump_schedules = false;
  auto* simulate = app.add_subcommand("simulate", "run one condition");
  add_condition_options(simulate, sim_args);
  simulate->add_option("--out", sim_out, "output directory")->default_val("simulate_out");
  simulate->add_flag("--dump-traces", dump_traces, "write per-room thermal_trace CSVs");
  simulate->add_flag("--dump-predictions", dump_predictions, "write predictions.csv");
  simulate->add_flag("--dump-schedules", dump_schedules, "write per-room setpoint schedule CSVs");

  std::vector<std::uint64_t> sweep_seeds;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "run the full condition grid");
  sweep->add_option("--seed", sweep_seeds, "seed(s) for prediction errors")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();

  ConditionArgs exp_args;
  std::string exp_out;
  auto* exporter = app.add_subcommand("export", "write per-room setpoint schedule files");
  add_condition_options(exporter, exp_args);
  exporter->add_option("--out", exp_out, "output directory")->required();

  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "regenerate tables from raw results");
  report->add_option("--in", report_in, "directory written by sweep or simulate")->required();
  report->add_option("--out", report_out, "output directory (defaults to --in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  try {
    if (*synth) {
      const auto exp = load_experiment(common, synth_seed);
      const auto sc = exp.build_scenario();
      save_occupancy(sc.traces, fs::path(synth_out) / "occupancy.csv");
      save_weather(sc.weather, fs::path(synth_out) / "weather.csv");
      const auto summary = occupancy_summary(sc.traces);
      out << "wrote " << sc.traces.size() << " rooms x " << sc.weather.grid.n_steps << " steps to " << synth_out
          << " (mean occupancy " << csv::format_fixed(100.0 * summary.mean, 1) << "%, SD "
          << csv::format_fixed(100.0 * summary.sd, 1) << "%)\n";
    } else if (*simulate) {
      const auto cond = condition_from(sim_args);
      const auto exp = load_experiment(common);
      const auto sc = exp.build_scenario();
      std::vector<RoomRun> detail;
      SweepSpec spec = exp.sweep;
      auto result = run_condition(cond, spec, sc, weights_for(sc), &detail);
      SweepReport rep;
      rep.provenance = Provenance{exp.canonical_text, sha256_hex(exp.canonical_text), {cond.seed}, spec.comfort.mode};
      rep.conditions.push_back(std::move(result));
      write_report(rep, sim_out);
      if (dump_traces) {
        for (const auto& r : detail) {
          csv::write_file(fs::path(sim_out) / "thermal" / (r.schedule.room_id + ".csv"),
                          format_thermal_trace(r.sim, sc.weather));
        }
      }
      if (dump_schedules) {
        for (const auto& r : detail) {
          csv::write_file(fs::path(sim_out) / "schedules" / (r.schedule.room_id + ".csv"), format_schedule(r.schedule));
        }
      }
      if (dump_predictions && cond.kind == StrategyKind::Predictive) {
        std::vector<PredictionTrace> preds;
        for (const auto& r : detail) preds.push_back(r.placement->trace);
        csv::write_file(fs::path(sim_out) / "predictions.csv", format_predictions(preds));
      }
      const auto& m = rep.conditions.front().metrics;
      out << m.label.key() << ": " << csv::format_fixed(m.total_energy_kwh, 2) << " kWh, MissTime "
          << csv::format_fixed(m.misstime().mean, 1) << " min/day\n";
    } else if (*sweep) {
      auto exp = load_experiment(common);
      exp.sweep.seeds = sweep_seeds;
      try {
        exp.sweep.validate();
      } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.what());
      }
      const auto sc = exp.build_scenario();
      const auto rep = run_sweep(exp.sweep, sc, exp.canonical_text);
      write_report(rep, sweep_out);
      out << "wrote " << rep.conditions.size() << " conditions (" << exp.sweep.conditions_per_seed()
          << " per seed) to " << sweep_out << "\n";
    } else if (*exporter) {
      const auto cond = condition_from(exp_args);
      const auto exp = load_experiment(common);
      const auto sc = exp.build_scenario();
      std::vector<RoomRun> detail;
      run_condition(cond, exp.sweep, sc, weights_for(sc), &detail);
      std::vector<SetpointSchedule> schedules;
      for (auto& r : detail) schedules.push_back(std::move(r.schedule));
      export_schedules(schedules, exp_out);
      out << "exported " << schedules.size() << " room schedules to " << exp_out << "\n";
    } else if (*report) {
      const auto rep = load_report(report_in);
      write_tables(rep, report_out.empty() ? report_in : report_out);
      out << "regenerated tables for " << rep.conditions.size() << " conditions\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigError ? kExitConfigError : kExitRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace hvacsim::cli
