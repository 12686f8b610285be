// Acceptance suite on the standard scenario: 20 rooms x 28 days x 5-min
// steps, university occupancy preset, heating-season synthetic weather, RC
// backend, seeds 1..20. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hvacsim/config.hpp"
#include "hvacsim/csv.hpp"
#include "hvacsim/harness.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace hvacsim;

namespace {

constexpr std::uint64_t kFirstSeed = 1;
constexpr std::uint64_t kLastSeed = 20;
constexpr double kRateTol = 0.005;
constexpr double kMaxConditionSeconds = 5.0;
constexpr std::size_t kClusterDraws = 100000;
constexpr double kClusterMeanTarget = 32.5;
constexpr double kClusterMeanTol = 0.5;
constexpr double kFreeResponseRelTol = 0.01;
constexpr double kSteadyStateRelTol = 0.001;
constexpr double kConservationTol = 1e-6;
constexpr std::size_t kMinSeedsHolding = 18;
constexpr double kMaxSweepSeconds = 120.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) { return csv::format_fixed(v, digits); }

config::Config standard_config(std::uint64_t seed) {
  config::Config cfg;
  cfg.set("scenario.synth_seed=" + std::to_string(seed));
  return cfg;
}

Scenario standard_scenario(std::uint64_t seed) {
  return ExperimentConfig::from(standard_config(seed)).build_scenario();
}

struct Result {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

// Condition identity without the seed, so results can be collected across seeds.
std::string cell(const ConditionSpec& c) {
  auto label = c.label();
  label.seed = 0;
  return label.key();
}

ConditionSpec make(StrategyKind kind, std::string bounds, std::optional<double> fp = {},
                   std::optional<double> fn = {}, std::uint64_t seed = 0) {
  ConditionSpec c;
  c.kind = kind;
  c.bounds = std::move(bounds);
  c.fp_rate = fp;
  c.fn_rate = fn;
  c.seed = seed;
  return c;
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Relative path -> contents for every regular file under `root`.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = file_bytes(e.path());
  }
  return out;
}

struct Collected {
  std::map<std::string, std::vector<double>> energy;    // cell -> per seed
  std::map<std::string, std::vector<double>> misstime;  // cell -> per seed
  double worst_rate_error = 0.0;
  std::size_t rate_checks = 0;
  bool oracle_identity = true;
  double max_condition_seconds = 0.0;
  double worst_conservation = 0.0;
  std::size_t conservation_runs = 0;
  std::vector<double> realized_cluster_minutes;
  std::map<double, std::size_t> quartile_holds;  // fn rate -> seeds where monotone
  std::vector<double> always_on_misstime;
};

void run_detailed(Collected& col) {
  const auto base = ExperimentConfig::from(standard_config(kFirstSeed));
  const auto& spec = base.sweep;
  for (std::uint64_t seed = kFirstSeed; seed <= kLastSeed; ++seed) {
    const Scenario sc = standard_scenario(seed);
    std::vector<SlotWeights> weights;
    for (const auto& tr : sc.traces) weights.push_back(compute_slot_weights(tr));

    auto conds = enumerate_conditions(spec, seed);
    for (const char* b : {"medium", "large"}) conds.push_back(make(StrategyKind::Reactive, b, {}, {}, seed));
    for (const char* b : {"small", "medium"}) conds.push_back(make(StrategyKind::Static, b, {}, {}, seed));
    for (const char* b : {"small", "medium", "large"})
      conds.push_back(make(StrategyKind::Predictive, b, 0.0, 0.0, seed));

    std::map<double, std::vector<oracle::FnSample>> fn_samples;
    for (const auto& cond : conds) {
      std::vector<RoomRun> detail;
      const auto t0 = Clock::now();
      const auto out = run_condition(cond, spec, sc, weights, &detail);
      col.max_condition_seconds = std::max(col.max_condition_seconds, seconds_since(t0));
      col.energy[cell(cond)].push_back(out.metrics.total_energy_kwh);
      col.misstime[cell(cond)].push_back(out.metrics.misstime().mean);

      for (std::size_t r = 0; r < detail.size(); ++r) {
        const auto& run = detail[r];
        col.worst_conservation =
            std::max(col.worst_conservation, energy_conservation_check(run.sim, sc.weather, sc.thermal));
        ++col.conservation_runs;
        if (!run.placement) continue;
        const auto& pred = run.placement->trace;
        const auto c = oracle::confusion(pred.predicted_occupied, sc.traces[r].occupied, pred.lookahead_steps());
        col.worst_rate_error = std::max({col.worst_rate_error, std::abs(oracle::fp_rate(c) - *cond.fp_rate),
                                         std::abs(oracle::fn_rate(c) - *cond.fn_rate)});
        ++col.rate_checks;
        if (*cond.fp_rate == 0.0 && *cond.fn_rate == 0.0) {
          const auto exact = oracle_predictions(sc.traces[r], spec.lookahead_minutes);
          col.oracle_identity = col.oracle_identity && exact.predicted_occupied == pred.predicted_occupied;
        }
        // Error placement does not depend on bounds; sample each fn level once.
        if (cond.bounds == "small" && *cond.fp_rate == 0.15) {
          oracle::collect_fn_samples(pred, sc.traces[r], weights[r], fn_samples[*cond.fn_rate]);
        }
        if (cond.bounds == "small") {
          for (int steps : run.placement->fn.realized_cluster_steps)
            col.realized_cluster_minutes.push_back(steps * sc.traces[r].grid.step_minutes);
          for (int steps : run.placement->fp.realized_cluster_steps)
            col.realized_cluster_minutes.push_back(steps * sc.traces[r].grid.step_minutes);
        }
      }
    }
    for (auto& [fn, samples] : fn_samples) {
      if (oracle::non_decreasing(oracle::fn_quartile_frequencies(std::move(samples)))) ++col.quartile_holds[fn];
      else col.quartile_holds.try_emplace(fn, 0);
    }

    Scenario unlimited = sc;
    unlimited.thermal.heat_capacity_w = std::numeric_limits<double>::infinity();
    unlimited.thermal.cool_capacity_w = std::numeric_limits<double>::infinity();
    const auto on = run_condition(make(StrategyKind::AlwaysOn, "small", {}, {}, seed), spec, unlimited, weights);
    col.always_on_misstime.push_back(std::max(on.metrics.misstime_band.mean, on.metrics.misstime_band.pooled));
  }
}

std::string pkey(double fp, double fn, const std::string& bounds) {
  return cell(make(StrategyKind::Predictive, bounds, fp, fn));
}

Result criterion_rates(const Collected& col) {
  const bool ok = col.worst_rate_error <= kRateTol && col.oracle_identity &&
                  col.max_condition_seconds <= kMaxConditionSeconds;
  return {1, "rate exactness", ok,
          "worst |realized - target| " + fmt(col.worst_rate_error, 5) + " over " + std::to_string(col.rate_checks) +
              " room runs; zero-error identity " + (col.oracle_identity ? "yes" : "NO") +
              "; slowest condition " + fmt(col.max_condition_seconds, 3) + " s"};
}

Result criterion_quartiles(const Collected& col) {
  bool ok = !col.quartile_holds.empty();
  std::string detail = "seeds with monotone FN quartiles (fp 0.15):";
  for (const auto& [fn, holds] : col.quartile_holds) {
    ok = ok && holds >= kMinSeedsHolding;
    detail += " fn " + fmt(fn) + " -> " + std::to_string(holds) + "/20";
  }
  return {2, "error-difficulty redistribution", ok, detail};
}

Result criterion_clusters(const Collected& col) {
  ErrorModel model;
  model.seed = 1;
  const auto stats = cluster_length_stats(model, kClusterDraws);
  const auto realized = mean_sd(col.realized_cluster_minutes);
  const bool ok = std::abs(stats.mean_minutes - kClusterMeanTarget) <= kClusterMeanTol;
  return {3, "cluster statistics", ok,
          "raw mean " + fmt(stats.mean_minutes, 3) + " min, raw SD " + fmt(stats.sd_minutes, 2) +
              " min; post-truncation mean " + fmt(realized.mean, 2) + " SD " + fmt(realized.sd, 2) + " min (n=" +
              std::to_string(col.realized_cluster_minutes.size()) + ")"};
}

Result criterion_thermal(const Collected& col) {
  constexpr std::size_t kSteps = 200;
  RoomThermalParams p;
  p.capacitance_j_per_k = 2.1e6;  // R*C = 42000 s = 140 steps of 300 s
  const TimeGrid grid{make_time(2011, 11, 7), 5, kSteps};
  const std::size_t rc_steps = static_cast<std::size_t>(p.time_constant_s() / grid.step_seconds());

  SetpointSchedule floating{"free", grid, std::vector<double>(kSteps, -50.0), std::vector<double>(kSteps, 60.0),
                            std::vector<std::uint8_t>(kSteps, 0)};
  WeatherSeries cold{grid, std::vector<double>(kSteps, 0.0)};
  const auto free = simulate_room(floating, cold, p);
  const double expected = oracle::rc_free_response(p.initial_temp_c, 0.0, p.time_constant_s(), p.time_constant_s());
  const double free_err = std::abs(free.indoor_temp_c[rc_steps] - expected) / std::abs(expected);

  SetpointSchedule hold{"hold", grid, std::vector<double>(kSteps, 20.0), std::vector<double>(kSteps, 24.0),
                        std::vector<std::uint8_t>(kSteps, 1)};
  WeatherSeries freezing{grid, std::vector<double>(kSteps, -5.0)};
  const auto held = simulate_room(hold, freezing, p);
  const double q_ss = (20.0 - -5.0) / p.resistance_k_per_w;
  const double ss_err = std::abs(held.hvac_thermal_w.back() - q_ss) / q_ss;

  const bool ok = free_err <= kFreeResponseRelTol && ss_err <= kSteadyStateRelTol &&
                  col.worst_conservation < kConservationTol;
  return {4, "thermal fidelity", ok,
          "free response at t=RC off by " + fmt(100 * free_err, 3) + "%; hold power " +
              fmt(held.hvac_thermal_w.back(), 3) + " W vs " + fmt(q_ss, 1) + " W; worst conservation residual " +
              csv::format_double(col.worst_conservation) + " over " + std::to_string(col.conservation_runs) +
              " runs"};
}

Result criterion_setback(const Collected& col, const SweepSpec& spec) {
  std::vector<std::pair<std::string, std::vector<std::string>>> families;
  for (double fp : spec.fp_rates)
    for (double fn : spec.fn_rates)
      families.push_back({"predictive", {pkey(fp, fn, "small"), pkey(fp, fn, "medium"), pkey(fp, fn, "large")}});
  for (auto kind : {StrategyKind::Reactive, StrategyKind::Static}) {
    std::vector<std::string> keys;
    for (const char* b : {"small", "medium", "large"}) keys.push_back(cell(make(kind, b)));
    families.push_back({std::string(to_string(kind)), keys});
  }
  bool ok = true;
  std::map<std::string, std::vector<double>> step1, step2;
  for (const auto& [name, keys] : families) {
    const auto& s = col.energy.at(keys[0]);
    const auto& m = col.energy.at(keys[1]);
    const auto& l = col.energy.at(keys[2]);
    for (std::size_t i = 0; i < s.size(); ++i) {
      ok = ok && s[i] > m[i] && m[i] > l[i];
      step1[name].push_back(percent_savings(m[i], s[i]));
      step2[name].push_back(percent_savings(l[i], m[i]));
    }
  }
  std::string detail = "mean savings small->medium / medium->large:";
  for (const auto& [name, v] : step1)
    detail += " " + name + " " + fmt(mean_sd(v).mean, 1) + "% / " + fmt(mean_sd(step2[name]).mean, 1) + "%";
  return {5, "energy decreases with setback width", ok, detail};
}

Result criterion_fp_trend(const Collected& col, const SweepSpec& spec) {
  bool ok = true;
  std::string detail = "median kWh fp 25->15->5 (fn 0.15):";
  for (double fn : spec.fn_rates)
    for (const auto& b : spec.bounds) {
      const double e25 = oracle::median(col.energy.at(pkey(0.25, fn, b)));
      const double e15 = oracle::median(col.energy.at(pkey(0.15, fn, b)));
      const double e05 = oracle::median(col.energy.at(pkey(0.05, fn, b)));
      ok = ok && e25 > e15 && e15 > e05;
      if (fn == 0.15) detail += " " + b + " " + fmt(e25, 0) + "/" + fmt(e15, 0) + "/" + fmt(e05, 0);
    }
  return {6, "energy falls with false-positive rate", ok, detail};
}

Result criterion_fn_trend(const Collected& col, const SweepSpec& spec) {
  bool ok = true;
  std::string detail = "median MissTime fn 25->15->5 (fp 0.15):";
  for (double fp : spec.fp_rates)
    for (const auto& b : spec.bounds) {
      const double m25 = oracle::median(col.misstime.at(pkey(fp, 0.25, b)));
      const double m15 = oracle::median(col.misstime.at(pkey(fp, 0.15, b)));
      const double m05 = oracle::median(col.misstime.at(pkey(fp, 0.05, b)));
      ok = ok && m25 > m15 && m15 > m05;
      if (fp == 0.15) detail += " " + b + " " + fmt(m25) + "/" + fmt(m15) + "/" + fmt(m05);
    }
  return {7, "MissTime falls with false-negative rate", ok, detail};
}

Result criterion_baselines(const Collected& col, const SweepSpec& spec) {
  const auto reactive = cell(make(StrategyKind::Reactive, "small"));
  const auto stat = cell(make(StrategyKind::Static, "large"));
  const std::size_t n_seeds = col.energy.at(reactive).size();
  std::size_t c_small = 0, c_react = 0, c_static = 0, c_comfort = 0;
  for (std::size_t i = 0; i < n_seeds; ++i) {
    bool small = true, react = true, stat_ok = true, comfort = true;
    for (double fp : spec.fp_rates)
      for (double fn : spec.fn_rates) {
        small = small && col.energy.at(reactive)[i] < col.energy.at(pkey(fp, fn, "small"))[i];
        for (const char* b : {"medium", "large"}) {
          react = react && col.energy.at(pkey(fp, fn, b))[i] < col.energy.at(reactive)[i];
          stat_ok = stat_ok && col.energy.at(pkey(fp, fn, b))[i] < col.energy.at(stat)[i];
        }
        for (const auto& b : spec.bounds)
          comfort = comfort && col.misstime.at(pkey(fp, fn, b))[i] < col.misstime.at(reactive)[i];
      }
    c_small += small;
    c_react += react;
    c_static += stat_ok;
    c_comfort += comfort;
  }
  const bool ok = c_small >= kMinSeedsHolding && c_react >= kMinSeedsHolding && c_static >= kMinSeedsHolding &&
                  c_comfort >= kMinSeedsHolding;
  auto frac = [&](std::size_t c) { return std::to_string(c) + "/" + std::to_string(n_seeds); };
  return {8, "baseline orderings", ok,
          "reactive@small < predictive@small " + frac(c_small) + "; predictive@medium,large < reactive@small " +
              frac(c_react) + "; predictive@medium,large < static@large " + frac(c_static) +
              "; predictive MissTime < reactive " + frac(c_comfort)};
}

Result criterion_floor(const Collected& col, const SweepSpec& spec) {
  const double worst_on = *std::max_element(col.always_on_misstime.begin(), col.always_on_misstime.end());
  bool ok = worst_on == 0.0;
  std::string detail = "always-on MissTime max " + csv::format_double(worst_on) + "; oracle median MissTime";
  for (const auto& b : spec.bounds) {
    const double oracle_med = oracle::median(col.misstime.at(pkey(0.0, 0.0, b)));
    double best_noisy = std::numeric_limits<double>::infinity();
    for (double fp : spec.fp_rates)
      for (double fn : spec.fn_rates) best_noisy = std::min(best_noisy, oracle::median(col.misstime.at(pkey(fp, fn, b))));
    ok = ok && oracle_med <= best_noisy;
    detail += " " + b + " " + fmt(oracle_med) + " (best noisy " + fmt(best_noisy) + ")";
  }
  return {9, "oracle comfort floor", ok, detail};
}

Result criterion_determinism(const SweepSpec& base_spec, const std::string& config_text) {
  SweepSpec spec = base_spec;
  spec.seeds.clear();
  for (std::uint64_t s = kFirstSeed; s <= kLastSeed; ++s) spec.seeds.push_back(s);
  const fs::path root = fs::temp_directory_path() / ("hvacsim-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);

  double slowest = 0.0;
  std::vector<std::map<std::string, std::string>> trees;
  std::size_t rows = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const auto t0 = Clock::now();
    const auto report = run_sweep(spec, standard_scenario, config_text);
    slowest = std::max(slowest, seconds_since(t0));
    const auto dir = root / ("run" + std::to_string(pass));
    write_report(report, dir);
    trees.push_back(snapshot(dir));
    rows = csv::lines(std::string_view(trees.back().at("metrics.csv"))).size() - 1;
  }
  // Tables regenerated from raw results must match the originals.
  write_tables(load_report(root / "run0"), root / "regen");
  const auto regen = snapshot(root / "regen");
  bool regen_ok = !regen.empty();
  for (const auto& [name, bytes] : regen) regen_ok = regen_ok && trees[0].count(name) && trees[0].at(name) == bytes;
  fs::remove_all(root);

  const std::size_t expected_rows = (27 + 2) * spec.seeds.size();
  const bool identical = trees[0] == trees[1];
  const bool ok = identical && regen_ok && rows == expected_rows && slowest <= kMaxSweepSeconds;
  return {10, "determinism and completeness", ok,
          std::string("byte-identical reruns ") + (identical ? "yes" : "NO") + " (" +
              std::to_string(trees[0].size()) + " files); regenerated tables match " + (regen_ok ? "yes" : "NO") +
              "; rows " + std::to_string(rows) + "/" + std::to_string(expected_rows) + "; sweep " + fmt(slowest, 1) +
              " s"};
}

Result criterion_export(const SweepSpec& spec) {
  const Scenario sc = standard_scenario(kFirstSeed);
  std::vector<SlotWeights> weights;
  for (const auto& tr : sc.traces) weights.push_back(compute_slot_weights(tr));
  std::vector<RoomRun> detail;
  run_condition(make(StrategyKind::Predictive, "medium", 0.15, 0.15, kFirstSeed), spec, sc, weights, &detail);
  std::vector<SetpointSchedule> schedules;
  for (auto& r : detail) schedules.push_back(std::move(r.schedule));

  const fs::path dir = fs::temp_directory_path() / ("hvacsim-export-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto files = export_schedules(schedules, dir);
  bool ok = files.size() == schedules.size();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < files.size() && ok; ++i) {
    const auto heat = read_schedule_file(files[i].heating);
    const auto cool = read_schedule_file(files[i].cooling);
    const auto heat_text = file_bytes(files[i].heating);
    const auto heat_lines = csv::lines(heat_text).size();
    ok = heat == schedules[i].heat_sp_c && cool == schedules[i].cool_sp_c && heat_lines == sc.weather.grid.n_steps;
    ++checked;
  }
  fs::remove_all(dir);
  return {11, "export integrity", ok,
          std::to_string(checked) + " rooms round-tripped, " + std::to_string(sc.weather.grid.n_steps) +
              " lines per file"};
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const auto base = ExperimentConfig::from(standard_config(kFirstSeed));
  Collected col;
  run_detailed(col);

  std::vector<Result> results{
      criterion_rates(col),
      criterion_quartiles(col),
      criterion_clusters(col),
      criterion_thermal(col),
      criterion_setback(col, base.sweep),
      criterion_fp_trend(col, base.sweep),
      criterion_fn_trend(col, base.sweep),
      criterion_baselines(col, base.sweep),
      criterion_floor(col, base.sweep),
      criterion_determinism(base.sweep, base.canonical_text),
      criterion_export(base.sweep),
  };

  std::size_t failed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << ": " << r.detail << "\n";
    failed += !r.pass;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed in "
            << fmt(seconds_since(t0), 1) << " s\n";
  return failed == 0 ? 0 : 1;
}
