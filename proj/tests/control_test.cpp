#include <gtest/gtest.h>

#include "hvacsim/control.hpp"
#include "hvacsim/stats.hpp"
#include "support/fixtures.hpp"

using namespace hvacsim;

TEST(Bounds, StandardPolicies) {
  const auto b = standard_bounds();
  EXPECT_EQ(b[0].name, "small");
  EXPECT_EQ(b[0].unoccupied_heat_sp_c(), 18.0);
  EXPECT_EQ(b[0].unoccupied_cool_sp_c(), 26.0);
  EXPECT_EQ(b[1].unoccupied_heat_sp_c(), 14.0);
  EXPECT_EQ(b[1].unoccupied_cool_sp_c(), 30.0);
  EXPECT_EQ(b[2].unoccupied_heat_sp_c(), 10.0);
  EXPECT_EQ(b[2].unoccupied_cool_sp_c(), 34.0);
  EXPECT_EQ(bounds_by_name("LARGE", 12.0).unoccupied_heat_sp_c(), 8.0);
  fixture::expect_error(ErrorKind::InvalidArgument, [] { bounds_by_name("huge"); });
}

TEST(Bounds, Validation) {
  BoundsPolicy p{"x", 24.0, 20.0, 2.0};
  EXPECT_THROW(p.validate(), Error);
  p = BoundsPolicy{"x", 20.0, 24.0, 0.0};
  EXPECT_THROW(p.validate(), Error);
}

TEST(Strategy, NamesRoundTrip) {
  for (auto k : {StrategyKind::Predictive, StrategyKind::Reactive, StrategyKind::Static, StrategyKind::AlwaysOn})
    EXPECT_EQ(parse_strategy(to_string(k)), k);
  fixture::expect_error(ErrorKind::InvalidArgument, [] { parse_strategy("psychic"); });
}

TEST(BuildSchedule, ReactiveOnAlwaysOccupied) {
  const auto truth = fixture::trace("A", fixture::grid(2), [](LocalMinutes) { return true; });
  const auto s = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[1]);
  for (std::size_t t = 0; t < truth.grid.n_steps; ++t) {
    EXPECT_EQ(s.conditioned[t], 1);
    EXPECT_EQ(s.heat_sp_c[t], 20.0);
    EXPECT_EQ(s.cool_sp_c[t], 24.0);
  }
}

TEST(BuildSchedule, OraclePredictiveAddsPreheat) {
  const auto truth = fixture::office_hours("A", fixture::grid(1));
  const auto pred = oracle_predictions(truth, 60);
  const auto s = build_schedule({StrategyKind::Predictive}, truth, &pred, standard_bounds()[0]);
  for (std::size_t t = 0; t < truth.grid.n_steps; ++t) {
    const int m = minute_of_day(truth.grid.at(t));
    const bool on = m >= 480 && m < 1020;
    EXPECT_EQ(s.conditioned[t], on ? 1 : 0) << m;
    EXPECT_EQ(s.heat_sp_c[t], on ? 20.0 : 18.0);
    EXPECT_EQ(s.cool_sp_c[t], on ? 24.0 : 26.0);
  }
}

TEST(BuildSchedule, PredictiveCoversReactive) {
  const auto truth = synth_occupancy(SynthOccupancyConfig::university_office(1, 28, 6)).front();
  ErrorModel m;
  m.fp_rate_target = 0.05;
  m.fn_rate_target = 0.25;
  m.seed = 2;
  const auto pred = place_errors(oracle_predictions(truth, 60), truth, compute_slot_weights(truth), m).trace;
  const auto p = build_schedule({StrategyKind::Predictive}, truth, &pred, standard_bounds()[2]);
  const auto r = build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[2]);
  for (std::size_t t = 0; t < truth.grid.n_steps; ++t) EXPECT_GE(p.conditioned[t], r.conditioned[t]);
  // Past the last valid issue time the schedule is purely reactive.
  for (std::size_t t = pred.valid_len(); t < truth.grid.n_steps; ++t) EXPECT_EQ(p.conditioned[t], truth.occupied[t]);
}

TEST(BuildSchedule, StaticWindowIgnoresOccupancy) {
  const auto truth = fixture::trace("A", fixture::grid(3), [](LocalMinutes) { return false; });
  const auto s = build_schedule({StrategyKind::Static}, truth, nullptr, standard_bounds()[2]);
  std::size_t on = 0;
  for (auto c : s.conditioned) on += c;
  EXPECT_EQ(on, 3u * 15u * 12u);
  EXPECT_EQ(s.conditioned[6 * 12], 1);
  EXPECT_EQ(s.conditioned[6 * 12 - 1], 0);
  EXPECT_EQ(s.conditioned[21 * 12], 0);
  fixture::expect_error(ErrorKind::InvalidArgument, [&] {
    build_schedule({StrategyKind::Static, {900, 600}}, truth, nullptr, standard_bounds()[0]);
  });
}

TEST(BuildSchedule, AlwaysOnAndErrors) {
  const auto truth = fixture::office_hours("A", fixture::grid(1));
  const auto s = build_schedule({StrategyKind::AlwaysOn}, truth, nullptr, standard_bounds()[0]);
  for (auto c : s.conditioned) EXPECT_EQ(c, 1);
  fixture::expect_error(ErrorKind::MissingPrediction,
                        [&] { build_schedule({StrategyKind::Predictive}, truth, nullptr, standard_bounds()[0]); });
  const auto other = fixture::office_hours("A", fixture::grid(2));
  const auto pred = oracle_predictions(other, 60);
  fixture::expect_error(ErrorKind::GridMismatch,
                        [&] { build_schedule({StrategyKind::Predictive}, truth, &pred, standard_bounds()[0]); });
}

TEST(FormatSchedule, Rows) {
  const auto truth = fixture::office_hours("A", fixture::grid(1));
  const auto text = format_schedule(build_schedule({StrategyKind::Reactive}, truth, nullptr, standard_bounds()[0]));
  EXPECT_EQ(text.rfind("timestamp,heat_sp_c,cool_sp_c,conditioned\n2011-11-07T00:00,18.0,26.0,0\n", 0), 0u);
  EXPECT_NE(text.find("2011-11-07T09:00,20.0,24.0,1\n"), std::string::npos);
}
