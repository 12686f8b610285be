#include "hvacsim/control.hpp"

#include <algorithm>
#include <cctype>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"

namespace hvacsim {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

void BoundsPolicy::validate() const {
  if (!(occupied_heat_sp_c < occupied_cool_sp_c)) {
    throw Error(ErrorKind::InvalidArgument, "bounds '" + name + "': heating setpoint must be below cooling setpoint");
  }
  if (!(setback_delta_c > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "bounds '" + name + "': setback must be positive");
  }
}

std::array<BoundsPolicy, 3> standard_bounds() {
  return {BoundsPolicy{"small", 20.0, 24.0, kSmallSetbackC}, BoundsPolicy{"medium", 20.0, 24.0, kMediumSetbackC},
          BoundsPolicy{"large", 20.0, 24.0, kLargeSetbackC}};
}

BoundsPolicy bounds_by_name(std::string_view name, double large_setback_c) {
  const auto key = lower(name);
  for (auto b : standard_bounds()) {
    if (b.name == key) {
      if (key == "large") b.setback_delta_c = large_setback_c;
      b.validate();
      return b;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown bounds '" + std::string(name) + "'");
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Predictive: return "predictive";
    case StrategyKind::Reactive: return "reactive";
    case StrategyKind::Static: return "static";
    case StrategyKind::AlwaysOn: return "always_on";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view text) {
  const auto key = lower(text);
  for (auto k : {StrategyKind::Predictive, StrategyKind::Reactive, StrategyKind::Static, StrategyKind::AlwaysOn}) {
    if (key == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

SetpointSchedule build_schedule(const Strategy& strategy, const OccupancyTrace& truth, const PredictionTrace* pred,
                                const BoundsPolicy& bounds) {
  truth.validate();
  bounds.validate();
  const std::size_t n = truth.grid.n_steps;
  SetpointSchedule s{truth.room_id, truth.grid, std::vector<double>(n), std::vector<double>(n),
                     std::vector<std::uint8_t>(n, 0)};

  switch (strategy.kind) {
    case StrategyKind::Predictive: {
      if (pred == nullptr) throw Error(ErrorKind::MissingPrediction, "predictive strategy needs a prediction trace");
      require_same_grid(pred->grid, truth.grid, "build_schedule");
      // A prediction issued at t about t + L turns conditioning on at t; the
      // controller always honours actual occupancy.
      for (std::size_t t = 0; t < n; ++t) {
        const bool predicted = t < pred->valid_len() && pred->predicted_occupied[t] != 0;
        s.conditioned[t] = (truth.occupied[t] != 0 || predicted) ? 1 : 0;
      }
      break;
    }
    case StrategyKind::Reactive:
      s.conditioned = truth.occupied;
      break;
    case StrategyKind::Static: {
      const auto& w = strategy.window;
      if (w.start_minute < 0 || w.start_minute >= w.end_minute || w.end_minute > 1440) {
        throw Error(ErrorKind::InvalidArgument, "static window must satisfy 0 <= start < end <= 24:00");
      }
      for (std::size_t t = 0; t < n; ++t) {
        const int m = minute_of_day(truth.grid.at(t));
        s.conditioned[t] = (m >= w.start_minute && m < w.end_minute) ? 1 : 0;
      }
      break;
    }
    case StrategyKind::AlwaysOn:
      std::fill(s.conditioned.begin(), s.conditioned.end(), std::uint8_t{1});
      break;
  }

  for (std::size_t t = 0; t < n; ++t) {
    const bool on = s.conditioned[t] != 0;
    s.heat_sp_c[t] = on ? bounds.occupied_heat_sp_c : bounds.unoccupied_heat_sp_c();
    s.cool_sp_c[t] = on ? bounds.occupied_cool_sp_c : bounds.unoccupied_cool_sp_c();
  }
  return s;
}

std::string format_schedule(const SetpointSchedule& schedule) {
  std::string out = "timestamp,heat_sp_c,cool_sp_c,conditioned\n";
  for (std::size_t t = 0; t < schedule.grid.n_steps; ++t) {
    out += format_timestamp(schedule.grid.at(t)) + "," + csv::format_double(schedule.heat_sp_c[t]) + "," +
           csv::format_double(schedule.cool_sp_c[t]) + (schedule.conditioned[t] ? ",1\n" : ",0\n");
  }
  return out;
}

}  // namespace hvacsim
