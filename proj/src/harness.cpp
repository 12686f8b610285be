#include "hvacsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"

namespace hvacsim {

std::string_view to_string(Backend backend) { return backend == Backend::RC ? "rc" : "degree_minutes"; }

Backend parse_backend(std::string_view text) {
  if (text == "rc") return Backend::RC;
  if (text == "degree_minutes") return Backend::DegreeMinutes;
  throw Error(ErrorKind::InvalidArgument, "unknown backend '" + std::string(text) + "'");
}

BaselineSpec parse_baseline(std::string_view text) {
  const auto at = text.find('@');
  if (at == std::string_view::npos) {
    throw Error(ErrorKind::InvalidArgument, "baseline must look like strategy@bounds, got '" + std::string(text) + "'");
  }
  BaselineSpec b{parse_strategy(text.substr(0, at)), std::string(text.substr(at + 1))};
  if (b.kind == StrategyKind::Predictive) {
    throw Error(ErrorKind::InvalidArgument, "predictive conditions come from the fp/fn grid, not baselines");
  }
  b.bounds = bounds_by_name(b.bounds).name;
  return b;
}

void SweepSpec::validate() const {
  if (fp_rates.empty() || fn_rates.empty() || bounds.empty()) {
    throw Error(ErrorKind::InvalidArgument, "sweep needs at least one fp rate, fn rate and bounds");
  }
  if (seeds.empty()) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one seed");
  for (const auto& b : bounds) bounds_policy(b);
  for (const auto& b : baselines) bounds_policy(b.bounds);
  ErrorModel probe{0.0, 0.0, lookahead_minutes, cluster_min_minutes, cluster_max_minutes, 0, fp_weighting};
  for (double fp : fp_rates) {
    for (double fn : fn_rates) {
      probe.fp_rate_target = fp;
      probe.fn_rate_target = fn;
      probe.validate(5);
    }
  }
  comfort.validate();
  const std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
  if (unique.size() != seeds.size()) throw Error(ErrorKind::InvalidArgument, "duplicate seeds");
}

BoundsPolicy SweepSpec::bounds_policy(std::string_view name) const {
  BoundsPolicy b = bounds_by_name(name, large_setback_c);
  b.occupied_heat_sp_c = occupied_heat_sp_c;
  b.occupied_cool_sp_c = occupied_cool_sp_c;
  b.validate();
  return b;
}

void Scenario::validate() const {
  if (traces.empty()) throw Error(ErrorKind::EmptyInput, "scenario has no occupancy traces");
  std::set<std::string, std::less<>> ids;
  for (const auto& tr : traces) {
    tr.validate();
    require_same_grid(tr.grid, traces.front().grid, "trace '" + tr.room_id + "'");
    if (!ids.insert(tr.room_id).second) throw Error(ErrorKind::InvalidArgument, "duplicate room id " + tr.room_id);
  }
  weather.validate();
  require_same_grid(weather.grid, traces.front().grid, "weather vs occupancy");
}

// ---------------------------------------------------------------------------
// Config mapping

namespace {

int parse_clock(std::string_view text) {
  int h = 0, m = 0;
  if (text.size() != 5 || text[2] != ':' || std::from_chars(text.data(), text.data() + 2, h).ec != std::errc{} ||
      std::from_chars(text.data() + 3, text.data() + 5, m).ec != std::errc{} || h > 24 || m > 59 ||
      (h == 24 && m != 0)) {
    throw Error(ErrorKind::ConfigError, "time of day must be HH:MM, got '" + std::string(text) + "'");
  }
  return h * 60 + m;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "scenario.occupancy", "scenario.weather", "scenario.start", "scenario.days", "scenario.rooms",
      "scenario.step_minutes", "scenario.target_mean_occupancy", "scenario.synth_seed",
      "occupancy.arrival_minute", "occupancy.arrival_sd_minutes", "occupancy.departure_minute",
      "occupancy.departure_sd_minutes", "occupancy.weekday_presence_prob", "occupancy.weekend_presence_prob",
      "occupancy.lunch_gap_prob", "occupancy.lunch_minute", "occupancy.lunch_sd_minutes",
      "occupancy.lunch_duration_minutes", "occupancy.room_activity_spread", "occupancy.room_shift_sd_minutes",
      "weather.annual_mean_c", "weather.annual_amplitude_c", "weather.coldest_day_of_year",
      "weather.diurnal_amplitude_c", "weather.peak_minute_of_day", "weather.noise_c",
      "thermal.backend", "thermal.resistance_k_per_w", "thermal.capacitance_j_per_k", "thermal.heat_capacity_w",
      "thermal.cool_capacity_w", "thermal.cop_heat", "thermal.cop_cool", "thermal.initial_temp_c",
      "thermal.ua_w_per_k",
      "control.heat_sp_c", "control.cool_sp_c", "control.large_setback_c", "control.static_start",
      "control.static_end",
      "predictor.lookahead_minutes", "predictor.cluster_min_minutes", "predictor.cluster_max_minutes",
      "predictor.fp_weighting",
      "sweep.fp_rates", "sweep.fn_rates", "sweep.bounds", "sweep.baselines",
      "comfort.mode", "comfort.tolerance_c", "comfort.fixed_temp_c",
  };
  return keys;
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const config::Config& cfg) {
  cfg.reject_unknown(known_keys());
  ExperimentConfig e;
  try {
    auto& s = e.sweep;
    s.fp_rates = cfg.get_double_list("sweep.fp_rates", s.fp_rates);
    s.fn_rates = cfg.get_double_list("sweep.fn_rates", s.fn_rates);
    s.bounds = cfg.get_string_list("sweep.bounds", s.bounds);
    if (cfg.has("sweep.baselines")) {
      s.baselines.clear();
      for (const auto& b : cfg.get_string_list("sweep.baselines", {})) s.baselines.push_back(parse_baseline(b));
    }
    s.lookahead_minutes = static_cast<int>(cfg.get_int("predictor.lookahead_minutes", s.lookahead_minutes));
    s.cluster_min_minutes = static_cast<int>(cfg.get_int("predictor.cluster_min_minutes", s.cluster_min_minutes));
    s.cluster_max_minutes = static_cast<int>(cfg.get_int("predictor.cluster_max_minutes", s.cluster_max_minutes));
    const auto weighting = cfg.get_string("predictor.fp_weighting", "occupancy");
    if (weighting == "occupancy") s.fp_weighting = FpWeighting::OccupancyLikelihood;
    else if (weighting == "uniform") s.fp_weighting = FpWeighting::Uniform;
    else throw Error(ErrorKind::ConfigError, "predictor.fp_weighting must be 'occupancy' or 'uniform'");
    s.backend = parse_backend(cfg.get_string("thermal.backend", "rc"));
    s.occupied_heat_sp_c = cfg.get_double("control.heat_sp_c", s.occupied_heat_sp_c);
    s.occupied_cool_sp_c = cfg.get_double("control.cool_sp_c", s.occupied_cool_sp_c);
    s.large_setback_c = cfg.get_double("control.large_setback_c", s.large_setback_c);
    s.static_window.start_minute = parse_clock(cfg.get_string("control.static_start", "06:00"));
    s.static_window.end_minute = parse_clock(cfg.get_string("control.static_end", "21:00"));
    s.comfort.mode = parse_comfort_mode(cfg.get_string("comfort.mode", "band"));
    s.comfort.tolerance_c = cfg.get_double("comfort.tolerance_c", s.comfort.tolerance_c);
    s.comfort.band_low_c = s.occupied_heat_sp_c;
    s.comfort.band_high_c = s.occupied_cool_sp_c;
    s.comfort.fixed_comfort_temp_c = cfg.get_double("comfort.fixed_temp_c", s.occupied_heat_sp_c);

    e.occupancy_path = cfg.get_string("scenario.occupancy", "");
    e.weather_path = cfg.get_string("scenario.weather", "");
    const auto start = parse_timestamp(cfg.get_string("scenario.start", "2011-11-07T00:00"));
    const auto n_days = cfg.get_int("scenario.days", 28);
    const auto n_rooms = cfg.get_int("scenario.rooms", 20);
    const auto step = static_cast<int>(cfg.get_int("scenario.step_minutes", 5));
    const auto synth_seed = static_cast<std::uint64_t>(cfg.get_int("scenario.synth_seed", 1));
    if (n_days < 1 || n_rooms < 1) throw Error(ErrorKind::ConfigError, "scenario.days and scenario.rooms must be >= 1");

    auto& o = e.synth_occupancy;
    o = SynthOccupancyConfig::university_office(static_cast<std::size_t>(n_rooms), static_cast<std::size_t>(n_days),
                                                synth_seed);
    o.start = start;
    o.step_minutes = step;
    o.target_mean_occupancy = cfg.get_double("scenario.target_mean_occupancy", *o.target_mean_occupancy);
    if (*o.target_mean_occupancy < 0.0) o.target_mean_occupancy.reset();
    o.arrival.mean_minute = cfg.get_double("occupancy.arrival_minute", o.arrival.mean_minute);
    o.arrival.sd_minutes = cfg.get_double("occupancy.arrival_sd_minutes", o.arrival.sd_minutes);
    o.departure.mean_minute = cfg.get_double("occupancy.departure_minute", o.departure.mean_minute);
    o.departure.sd_minutes = cfg.get_double("occupancy.departure_sd_minutes", o.departure.sd_minutes);
    o.weekday_presence_prob = cfg.get_double("occupancy.weekday_presence_prob", o.weekday_presence_prob);
    o.weekend_presence_prob = cfg.get_double("occupancy.weekend_presence_prob", o.weekend_presence_prob);
    o.lunch_gap_prob = cfg.get_double("occupancy.lunch_gap_prob", o.lunch_gap_prob);
    o.lunch_start.mean_minute = cfg.get_double("occupancy.lunch_minute", o.lunch_start.mean_minute);
    o.lunch_start.sd_minutes = cfg.get_double("occupancy.lunch_sd_minutes", o.lunch_start.sd_minutes);
    o.lunch_duration_minutes =
        static_cast<int>(cfg.get_int("occupancy.lunch_duration_minutes", o.lunch_duration_minutes));
    o.room_activity_spread = cfg.get_double("occupancy.room_activity_spread", o.room_activity_spread);
    o.room_shift_sd_minutes = cfg.get_double("occupancy.room_shift_sd_minutes", o.room_shift_sd_minutes);

    auto& w = e.synth_weather;
    w = SynthWeatherConfig::pittsburgh_like(start, static_cast<std::size_t>(n_days), synth_seed);
    w.step_minutes = step;
    w.annual_mean_c = cfg.get_double("weather.annual_mean_c", w.annual_mean_c);
    w.annual_amplitude_c = cfg.get_double("weather.annual_amplitude_c", w.annual_amplitude_c);
    w.coldest_day_of_year = static_cast<int>(cfg.get_int("weather.coldest_day_of_year", w.coldest_day_of_year));
    w.diurnal_amplitude_c = cfg.get_double("weather.diurnal_amplitude_c", w.diurnal_amplitude_c);
    w.peak_minute_of_day = static_cast<int>(cfg.get_int("weather.peak_minute_of_day", w.peak_minute_of_day));
    w.noise_c = cfg.get_double("weather.noise_c", w.noise_c);

    auto& t = e.thermal;
    t.resistance_k_per_w = cfg.get_double("thermal.resistance_k_per_w", t.resistance_k_per_w);
    t.capacitance_j_per_k = cfg.get_double("thermal.capacitance_j_per_k", t.capacitance_j_per_k);
    t.heat_capacity_w = cfg.get_double("thermal.heat_capacity_w", t.heat_capacity_w);
    t.cool_capacity_w = cfg.get_double("thermal.cool_capacity_w", t.cool_capacity_w);
    t.cop_heat = cfg.get_double("thermal.cop_heat", t.cop_heat);
    t.cop_cool = cfg.get_double("thermal.cop_cool", t.cop_cool);
    t.initial_temp_c = cfg.get_double("thermal.initial_temp_c", s.occupied_heat_sp_c);
    e.degree_minutes.ua_w_per_k = cfg.get_double("thermal.ua_w_per_k", e.degree_minutes.ua_w_per_k);
    e.degree_minutes.cop_heat = t.cop_heat;
    e.degree_minutes.cop_cool = t.cop_cool;

    s.validate();
    o.validate();
    w.validate();
    t.validate();
    e.degree_minutes.validate();
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::ConfigError) throw;
    throw Error(ErrorKind::ConfigError, err.what());
  }
  e.canonical_text = cfg.canonical();
  return e;
}

Scenario ExperimentConfig::build_scenario() const {
  Scenario sc;
  sc.traces = occupancy_path.empty() ? hvacsim::synth_occupancy(synth_occupancy) : load_occupancy(occupancy_path);
  const TimeGrid grid = sc.traces.front().grid;
  if (weather_path.empty()) {
    SynthWeatherConfig w = synth_weather;
    w.start = grid.start;
    w.step_minutes = grid.step_minutes;
    w.n_days = (grid.n_steps * grid.step_minutes + 1439) / 1440;
    sc.weather = hvacsim::synth_weather(w);
    sc.weather.grid.n_steps = grid.n_steps;
    sc.weather.outdoor_temp_c.resize(grid.n_steps);
  } else {
    sc.weather = load_weather(weather_path, grid);
  }
  sc.thermal = thermal;
  sc.degree_minutes = degree_minutes;
  sc.validate();
  return sc;
}

// ---------------------------------------------------------------------------
// Conditions

ConditionLabel ConditionSpec::label() const {
  return ConditionLabel{std::string(to_string(kind)), fp_rate, fn_rate, bounds, seed};
}

std::vector<ConditionSpec> enumerate_conditions(const SweepSpec& spec, std::uint64_t seed) {
  std::vector<ConditionSpec> out;
  for (double fp : spec.fp_rates) {
    for (double fn : spec.fn_rates) {
      for (const auto& b : spec.bounds) out.push_back({StrategyKind::Predictive, fp, fn, b, seed});
    }
  }
  for (const auto& base : spec.baselines) out.push_back({base.kind, std::nullopt, std::nullopt, base.bounds, seed});
  return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

ConditionOutput run_condition(const ConditionSpec& cond, const SweepSpec& spec, const Scenario& scenario,
                              const std::vector<SlotWeights>& weights, std::vector<RoomRun>* detail) {
  const auto label = cond.label();
  const std::size_t n = scenario.traces.size();
  if (cond.kind == StrategyKind::Predictive && weights.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "slot weights must be provided for every room");
  }
  try {
    const BoundsPolicy bounds = spec.bounds_policy(cond.bounds);
    const Strategy strategy{cond.kind, spec.static_window};
    std::vector<RoomRun> runs(n);
    std::vector<RoomRecord> records(n);
    parallel_for(n, [&](std::size_t r) {
      const auto& truth = scenario.traces[r];
      std::optional<RateReport> rates;
      std::optional<PlacementResult> placement;
      if (cond.kind == StrategyKind::Predictive) {
        const ErrorModel model{cond.fp_rate.value_or(0.0), cond.fn_rate.value_or(0.0), spec.lookahead_minutes,
                               spec.cluster_min_minutes, spec.cluster_max_minutes, cond.seed, spec.fp_weighting};
        placement = place_errors(oracle_predictions(truth, spec.lookahead_minutes), truth, weights[r], model);
        rates = measure_rates(placement->trace, truth);
      }
      auto schedule = build_schedule(strategy, truth, placement ? &placement->trace : nullptr, bounds);
      auto sim = spec.backend == Backend::RC ? simulate_room(schedule, scenario.weather, scenario.thermal)
                                             : degree_minutes_energy(schedule, scenario.weather, scenario.degree_minutes);
      records[r] = make_room_record(sim, truth, spec.comfort, rates);
      if (detail) runs[r] = RoomRun{std::move(schedule), std::move(sim), std::move(placement)};
    });
    if (detail) *detail = std::move(runs);
    return ConditionOutput{aggregate(label, records, spec.comfort.mode), std::move(records)};
  } catch (const Error& e) {
    throw Error(e.kind(), "condition " + label.key() + ": " + e.what());
  }
}

SweepReport run_sweep(const SweepSpec& spec, const Scenario& scenario, std::string_view config_text) {
  return run_sweep(spec, [&](std::uint64_t) { return scenario; }, config_text);
}

SweepReport run_sweep(const SweepSpec& spec, const ScenarioForSeed& scenario_for_seed, std::string_view config_text) {
  spec.validate();
  SweepReport report;
  report.provenance = Provenance{std::string(config_text), sha256_hex(config_text), spec.seeds, spec.comfort.mode};
  for (std::uint64_t seed : spec.seeds) {
    const Scenario scenario = scenario_for_seed(seed);
    scenario.validate();
    for (const auto& d : dst_transition_days(scenario.weather.grid)) {
      auto& flagged = report.provenance.dst_days;
      if (std::find(flagged.begin(), flagged.end(), d) == flagged.end()) flagged.push_back(d);
    }
    std::vector<SlotWeights> weights;
    for (const auto& tr : scenario.traces) weights.push_back(compute_slot_weights(tr));
    // Baselines run once per seed; every savings figure compares against these.
    for (const auto& cond : enumerate_conditions(spec, seed)) {
      report.conditions.push_back(run_condition(cond, spec, scenario, weights));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sensitivity

std::vector<SensitivityRow> sensitivity_table(const SweepReport& report) {
  std::set<double> fps, fns;
  for (const auto& c : report.conditions) {
    if (!c.metrics.label.is_predictive()) continue;
    fps.insert(*c.metrics.label.fp_rate);
    fns.insert(*c.metrics.label.fn_rate);
  }
  if (fps.size() < 2 || fns.size() < 2) {
    throw Error(ErrorKind::InsufficientGrid, "sensitivity needs at least two fp and two fn levels");
  }
  auto mean_at = [&](bool by_fp, double rate) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& c : report.conditions) {
      const auto& l = c.metrics.label;
      if (!l.is_predictive() || (by_fp ? *l.fp_rate : *l.fn_rate) != rate) continue;
      sum += by_fp ? c.metrics.total_energy_kwh : c.metrics.misstime().mean;
      ++count;
    }
    return sum / static_cast<double>(count);
  };
  std::vector<SensitivityRow> rows;
  auto add = [&](bool by_fp, const std::set<double>& levels) {
    const std::vector<double> desc(levels.rbegin(), levels.rend());
    for (std::size_t i = 0; i + 1 < desc.size(); ++i) {
      SensitivityRow row;
      row.factor = by_fp ? "fp" : "fn";
      row.metric = by_fp ? "energy_kwh" : "misstime_min";
      row.from_rate = desc[i];
      row.to_rate = desc[i + 1];
      row.mean_from = mean_at(by_fp, desc[i]);
      row.mean_to = mean_at(by_fp, desc[i + 1]);
      row.abs_delta = row.mean_from - row.mean_to;
      row.pct_delta = row.mean_from != 0.0 ? 100.0 * row.abs_delta / row.mean_from : 0.0;
      rows.push_back(row);
    }
  };
  add(true, fps);
  add(false, fns);
  return rows;
}

}  // namespace hvacsim
