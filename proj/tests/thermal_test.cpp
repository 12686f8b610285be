#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "hvacsim/control.hpp"
#include "hvacsim/thermal.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace hvacsim;

namespace {

SetpointSchedule flat_schedule(const TimeGrid& g, double heat, double cool) {
  return {"A", g, std::vector<double>(g.n_steps, heat), std::vector<double>(g.n_steps, cool),
          std::vector<std::uint8_t>(g.n_steps, 1)};
}

WeatherSeries wavy_weather(const TimeGrid& g, double mean, double amp) {
  WeatherSeries w{g, std::vector<double>(g.n_steps)};
  for (std::size_t i = 0; i < g.n_steps; ++i) w.outdoor_temp_c[i] = mean + amp * std::sin(2 * M_PI * i / 288.0);
  return w;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST(SimulateRoom, IdleInsideBand) {
  const auto g = fixture::grid(1);
  RoomThermalParams p;
  p.initial_temp_c = 22.0;
  const auto r = simulate_room(flat_schedule(g, 20, 24), fixture::constant_weather(g, 22.0), p);
  EXPECT_EQ(r.total_kwh(), 0.0);
  for (double q : r.hvac_thermal_w) EXPECT_EQ(q, 0.0);
  EXPECT_EQ(r.final_temp_c, 22.0);
}

TEST(SimulateRoom, FreeResponseMatchesExponential) {
  RoomThermalParams p;
  p.heat_capacity_w = 0.0;
  p.cool_capacity_w = 0.0;
  p.capacitance_j_per_k = 3.0e6;  // R*C = 60000 s = 200 steps
  const TimeGrid g{make_time(2011, 11, 7), 5, 400};
  const auto r = simulate_room(flat_schedule(g, 20, 24), fixture::constant_weather(g, 0.0), p);
  const double expected = oracle::rc_free_response(20.0, 0.0, 60000.0, 60000.0);
  EXPECT_NEAR(r.indoor_temp_c[200], expected, 0.01 * expected);
  for (double q : r.hvac_thermal_w) EXPECT_EQ(q, 0.0);
}

TEST(SimulateRoom, SteadyStateHoldPower) {
  const auto g = fixture::grid(1);
  RoomThermalParams p;
  const auto r = simulate_room(flat_schedule(g, 20, 24), fixture::constant_weather(g, -5.0), p);
  const double q_ss = 25.0 / 0.02;
  EXPECT_NEAR(r.hvac_thermal_w.back(), q_ss, 1e-3 * q_ss);
  EXPECT_NEAR(r.electrical_kwh.back(), q_ss * 300.0 / 3.6e6, 1e-9);
  EXPECT_NEAR(r.total_kwh(), 1250.0 * 24.0 / 1000.0, 1e-6);
}

TEST(SimulateRoom, CoolingUsesCoolingCop) {
  const auto g = fixture::grid(1);
  RoomThermalParams p;
  p.initial_temp_c = 24.0;
  const auto r = simulate_room(flat_schedule(g, 20, 24), fixture::constant_weather(g, 34.0), p);
  EXPECT_NEAR(r.hvac_thermal_w.back(), -500.0, 1e-6);
  EXPECT_NEAR(r.total_kwh(), 500.0 * 24.0 / 1000.0 / 3.0, 1e-6);
}

TEST(SimulateRoom, ThermostatLandsOnSetpointOrSaturates) {
  const auto g = fixture::grid(2);
  RoomThermalParams p;
  p.heat_capacity_w = 1500.0;
  p.initial_temp_c = 12.0;
  auto sched = flat_schedule(g, 20, 24);
  for (std::size_t t = 0; t < g.n_steps; ++t)
    if (t % 100 < 40) sched.heat_sp_c[t] = 10.0;
  const auto w = wavy_weather(g, 0.0, 6.0);
  const auto r = simulate_room(sched, w, p);
  for (std::size_t t = 0; t + 1 < g.n_steps; ++t) {
    const double q = r.hvac_thermal_w[t];
    if (q > 0.0 && q < p.heat_capacity_w) EXPECT_NEAR(r.indoor_temp_c[t + 1], sched.heat_sp_c[t], 1e-9);
    EXPECT_LE(q, p.heat_capacity_w);
    EXPECT_GE(q, 0.0);
    EXPECT_LE(r.indoor_temp_c[t + 1], std::max(sched.heat_sp_c[t], r.indoor_temp_c[t]) + 1e-9);
  }
}

TEST(SimulateRoom, BandRespectedWithUnlimitedPlant) {
  const auto g = fixture::grid(3);
  RoomThermalParams p;
  p.heat_capacity_w = kInf;
  p.cool_capacity_w = kInf;
  p.initial_temp_c = 5.0;
  const auto truth = fixture::office_hours("A", g);
  const auto sched = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[1]);
  const auto r = simulate_room(sched, wavy_weather(g, 18.0, 20.0), p);
  for (std::size_t t = 1; t < g.n_steps; ++t) {
    EXPECT_GE(r.indoor_temp_c[t], sched.heat_sp_c[t - 1] - 1e-9);
    EXPECT_LE(r.indoor_temp_c[t], sched.cool_sp_c[t - 1] + 1e-9);
  }
}

TEST(SimulateRoom, MonthlyTotalsSumToSeries) {
  const auto g = fixture::grid(40, 5, make_time(2011, 11, 20));
  const auto truth = fixture::office_hours("A", g);
  const auto sched = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[0]);
  const auto r = simulate_room(sched, wavy_weather(g, 2.0, 5.0), RoomThermalParams{});
  ASSERT_EQ(r.monthly_energy_kwh.size(), 2u);
  double monthly = 0.0;
  for (const auto& [_, v] : r.monthly_energy_kwh) monthly += v;
  EXPECT_NEAR(monthly, r.total_kwh(), 1e-9 * r.total_kwh());
}

TEST(SimulateRoom, ErrorsOnUnstableStepAndGrid) {
  const auto g = fixture::grid(1, 60);
  RoomThermalParams p;
  p.capacitance_j_per_k = 1.0e5;  // R*C = 2000 s < 3600 s
  fixture::expect_error(ErrorKind::UnstableStep,
                        [&] { simulate_room(flat_schedule(g, 20, 24), fixture::constant_weather(g, 0), p); });
  fixture::expect_error(ErrorKind::GridMismatch, [&] {
    simulate_room(flat_schedule(fixture::grid(1), 20, 24), fixture::constant_weather(fixture::grid(2), 0),
                  RoomThermalParams{});
  });
  p = RoomThermalParams{};
  p.cop_heat = 0.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(SimulateRoom, WiderSetbackNeverCostsMore) {
  const auto g = fixture::grid(14);
  const auto truth = synth_occupancy(SynthOccupancyConfig::university_office(1, 14, 3)).front();
  const auto w = wavy_weather(g, 4.0, 5.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {1.0, 2.0, 4.0, 6.0, 10.0}) {
    const auto sched = build_schedule({StrategyKind::Reactive}, truth, nullptr, {"x", 20.0, 24.0, delta});
    const double e = simulate_room(sched, w, RoomThermalParams{}).total_kwh();
    EXPECT_LE(e, prev) << delta;
    prev = e;
  }
}

TEST(DegreeMinutes, Examples) {
  const auto g = fixture::grid(1);
  DegreeMinuteParams p;
  const auto zero = degree_minutes_energy(flat_schedule(g, 20, 24), fixture::constant_weather(g, 22.0), p);
  EXPECT_EQ(zero.total_kwh(), 0.0);
  const auto day = degree_minutes_energy(flat_schedule(g, 20, 24), fixture::constant_weather(g, 0.0), p);
  EXPECT_NEAR(day.total_kwh(), 24.0, 1e-9);
  EXPECT_EQ(day.indoor_temp_c.front(), 20.0);
  const auto hot = degree_minutes_energy(flat_schedule(g, 20, 24), fixture::constant_weather(g, 30.0), p);
  EXPECT_NEAR(hot.total_kwh(), 50.0 * 6.0 * 24.0 / 1000.0 / 3.0, 1e-9);
}

TEST(DegreeMinutes, WiderSetbackSavesWhenCold) {
  const auto g = fixture::grid(7);
  const auto truth = fixture::office_hours("A", g);
  const auto w = fixture::constant_weather(g, 5.0);
  const auto narrow = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[0]);
  const auto wide = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[1]);
  EXPECT_LT(degree_minutes_energy(wide, w, {}).total_kwh(), degree_minutes_energy(narrow, w, {}).total_kwh());
}

TEST(Backends, AgreeOnSubsetOrdering) {
  const auto g = fixture::grid(7);
  const auto truth = fixture::office_hours("A", g);
  const auto w = wavy_weather(g, 3.0, 4.0);
  const auto reactive = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[1]);
  const auto always = build_schedule({StrategyKind::AlwaysOn}, truth, nullptr, standard_bounds()[1]);
  EXPECT_LE(simulate_room(reactive, w, {}).total_kwh(), simulate_room(always, w, {}).total_kwh());
  EXPECT_LE(degree_minutes_energy(reactive, w, {}).total_kwh(), degree_minutes_energy(always, w, {}).total_kwh());
}

TEST(Conservation, ResidualIsNegligibleAndCatchesCorruption) {
  const auto g = fixture::grid(7);
  const auto truth = fixture::office_hours("A", g);
  const auto w = wavy_weather(g, 3.0, 6.0);
  RoomThermalParams p;
  auto r = simulate_room(build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[2]), w, p);
  EXPECT_LT(energy_conservation_check(r, w, p), 1e-6);

  p.heat_capacity_w = 0.0;
  p.cool_capacity_w = 0.0;
  const auto free = simulate_room(flat_schedule(g, 20, 24), w, p);
  EXPECT_LT(energy_conservation_check(free, w, p), 1e-6);

  r.indoor_temp_c[500] += 1.0;
  EXPECT_GT(energy_conservation_check(r, w, RoomThermalParams{}), 1e-6);
}

TEST(ThermalTrace, Columns) {
  const auto g = fixture::grid(1);
  const auto w = fixture::constant_weather(g, -5.0);
  const auto text = format_thermal_trace(simulate_room(flat_schedule(g, 20, 24), w, {}), w);
  EXPECT_EQ(text.rfind("timestamp,t_out_c,t_in_c,hvac_thermal_w,kwh_step\n2011-11-07T00:00,-5.0,20.0,", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), 289u);
}
