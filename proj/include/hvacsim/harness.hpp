#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hvacsim/config.hpp"
#include "hvacsim/control.hpp"
#include "hvacsim/metrics.hpp"
#include "hvacsim/predictor.hpp"
#include "hvacsim/stats.hpp"
#include "hvacsim/thermal.hpp"
#include "hvacsim/trace.hpp"

namespace hvacsim {

inline constexpr std::string_view kSoftwareName = "hvacsim";
inline constexpr std::string_view kSoftwareVersion = "0.1.0";

enum class Backend { RC, DegreeMinutes };
std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view text);

struct BaselineSpec {
  StrategyKind kind = StrategyKind::Reactive;
  std::string bounds = "small";
};
// "reactive@small" style.
BaselineSpec parse_baseline(std::string_view text);

struct SweepSpec {
  std::vector<double> fp_rates{0.05, 0.15, 0.25};
  std::vector<double> fn_rates{0.05, 0.15, 0.25};
  std::vector<std::string> bounds{"small", "medium", "large"};
  int lookahead_minutes = 60;
  int cluster_min_minutes = 5;
  int cluster_max_minutes = 60;
  FpWeighting fp_weighting = FpWeighting::OccupancyLikelihood;
  std::vector<BaselineSpec> baselines{{StrategyKind::Reactive, "small"}, {StrategyKind::Static, "large"}};
  std::vector<std::uint64_t> seeds{7};
  Backend backend = Backend::RC;
  ComfortConfig comfort{};
  double occupied_heat_sp_c = 20.0;
  double occupied_cool_sp_c = 24.0;
  double large_setback_c = kLargeSetbackC;
  StaticWindow static_window{};

  void validate() const;
  std::size_t conditions_per_seed() const { return fp_rates.size() * fn_rates.size() * bounds.size() + baselines.size(); }
  BoundsPolicy bounds_policy(std::string_view name) const;
};

struct Scenario {
  std::vector<OccupancyTrace> traces;
  WeatherSeries weather;
  RoomThermalParams thermal{};
  DegreeMinuteParams degree_minutes{};

  // Every trace and the weather share one grid; room ids are unique.
  void validate() const;
};

// Everything a CLI run needs, assembled from a config file plus overrides.
struct ExperimentConfig {
  SweepSpec sweep;
  std::string occupancy_path;  // empty: synthesize
  std::string weather_path;    // empty: synthesize
  SynthOccupancyConfig synth_occupancy;
  SynthWeatherConfig synth_weather;
  RoomThermalParams thermal;
  DegreeMinuteParams degree_minutes;
  std::string canonical_text;  // normalized config echo

  static ExperimentConfig from(const config::Config& cfg);
  Scenario build_scenario() const;
};

struct ConditionSpec {
  StrategyKind kind = StrategyKind::Predictive;
  std::optional<double> fp_rate;
  std::optional<double> fn_rate;
  std::string bounds;
  std::uint64_t seed = 0;

  ConditionLabel label() const;
};

// Predictive fp x fn x bounds in configured order, then the baselines.
std::vector<ConditionSpec> enumerate_conditions(const SweepSpec& spec, std::uint64_t seed);

struct RoomRun {
  SetpointSchedule schedule;
  SimResult sim;
  std::optional<PlacementResult> placement;
};

struct ConditionOutput {
  RunMetrics metrics;
  std::vector<RoomRecord> rooms;
};

// Runs one condition over every room. When `detail` is given it receives the
// per-room schedules, simulations and error placements.
ConditionOutput run_condition(const ConditionSpec& cond, const SweepSpec& spec, const Scenario& scenario,
                              const std::vector<SlotWeights>& weights, std::vector<RoomRun>* detail = nullptr);

struct Provenance {
  std::string config_text;
  std::string config_sha256;
  std::vector<std::uint64_t> seeds;
  ComfortMode comfort_mode = ComfortMode::Band;
  std::vector<std::string> dst_days;  // flagged for audit, see dst_transition_days
};

struct SweepReport {
  Provenance provenance;
  std::vector<ConditionOutput> conditions;  // seed-major, enumerate_conditions order
};

using ScenarioForSeed = std::function<Scenario(std::uint64_t seed)>;

SweepReport run_sweep(const SweepSpec& spec, const Scenario& scenario, std::string_view config_text = "");
// Lets each seed draw its own scenario (e.g. synthetic data seeded per run).
SweepReport run_sweep(const SweepSpec& spec, const ScenarioForSeed& scenario_for_seed,
                      std::string_view config_text = "");

struct SensitivityRow {
  std::string factor;  // "fp" or "fn"
  std::string metric;  // "energy_kwh" or "misstime_min"
  double from_rate = 0.0;
  double to_rate = 0.0;
  double mean_from = 0.0;
  double mean_to = 0.0;
  double abs_delta = 0.0;  // mean_from - mean_to
  double pct_delta = 0.0;  // 100 * abs_delta / mean_from
};

// Adjacent-level deltas, from the highest rate down: energy per fp step
// (averaged over fn, bounds and seeds) and MissTime per fn step.
std::vector<SensitivityRow> sensitivity_table(const SweepReport& report);

// Writes every report file plus raw per-room results under `dir`.
void write_report(const SweepReport& report, const std::filesystem::path& dir);
// Only the derived tables (metrics, figures, rates, sensitivity, manifest).
void write_tables(const SweepReport& report, const std::filesystem::path& dir);
// Rebuilds a report from `dir/raw` and `dir/manifest.json`.
SweepReport load_report(const std::filesystem::path& dir);

std::string sha256_hex(std::string_view data);

struct ScheduleFiles {
  std::filesystem::path heating;
  std::filesystem::path cooling;
};

// Per room: <room>_heating.csv and <room>_cooling.csv with one setpoint per
// line, plus schedules_manifest.csv mapping rooms to files.
std::vector<ScheduleFiles> export_schedules(const std::vector<SetpointSchedule>& schedules,
                                            const std::filesystem::path& dir);
std::vector<double> read_schedule_file(const std::filesystem::path& path);

// Runs `fn(i)` for i in [0, n) on a pool of worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hvacsim
