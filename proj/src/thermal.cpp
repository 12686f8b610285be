#include "hvacsim/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"

namespace hvacsim {

namespace {

constexpr double kJoulesPerKwh = 3.6e6;

void accumulate_monthly(SimResult& r) {
  for (std::size_t t = 0; t < r.grid.n_steps; ++t) r.monthly_energy_kwh[month_key(r.grid.at(t))] += r.electrical_kwh[t];
}

}  // namespace

void RoomThermalParams::validate() const {
  if (!(resistance_k_per_w > 0.0) || !(capacitance_j_per_k > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "R and C must be positive");
  }
  if (!(heat_capacity_w >= 0.0) || !(cool_capacity_w >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "HVAC capacities must be non-negative");
  }
  if (!(cop_heat > 0.0) || !(cop_cool > 0.0)) throw Error(ErrorKind::InvalidArgument, "COPs must be positive");
  if (!std::isfinite(initial_temp_c)) throw Error(ErrorKind::InvalidArgument, "initial temperature must be finite");
}

void DegreeMinuteParams::validate() const {
  if (!(ua_w_per_k > 0.0)) throw Error(ErrorKind::InvalidArgument, "UA must be positive");
  if (!(cop_heat > 0.0) || !(cop_cool > 0.0)) throw Error(ErrorKind::InvalidArgument, "COPs must be positive");
}

double SimResult::total_kwh() const {
  return std::accumulate(electrical_kwh.begin(), electrical_kwh.end(), 0.0);
}

SimResult simulate_room(const SetpointSchedule& schedule, const WeatherSeries& weather,
                        const RoomThermalParams& params) {
  params.validate();
  require_same_grid(schedule.grid, weather.grid, "simulate_room");
  const double dt = schedule.grid.step_seconds();
  const double R = params.resistance_k_per_w;
  const double C = params.capacitance_j_per_k;
  if (dt >= params.time_constant_s()) {
    throw Error(ErrorKind::UnstableStep, "step of " + csv::format_double(dt) + " s is not below R*C = " +
                                             csv::format_double(params.time_constant_s()) + " s");
  }

  const std::size_t n = schedule.grid.n_steps;
  SimResult r{schedule.room_id, schedule.grid, std::vector<double>(n), 0.0, std::vector<double>(n),
              std::vector<double>(n), {}};
  double temp = params.initial_temp_c;
  for (std::size_t t = 0; t < n; ++t) {
    const double t_out = weather.outdoor_temp_c[t];
    const double loss_w = (t_out - temp) / R;
    const double free_next = temp + dt / C * loss_w;
    // Ideal thermostat: deliver exactly the power that lands the next state on
    // the violated setpoint, limited by plant capacity.
    double q = 0.0;
    if (free_next < schedule.heat_sp_c[t]) {
      const double hold = C * (schedule.heat_sp_c[t] - temp) / dt - loss_w;
      q = std::min(params.heat_capacity_w, hold);
    } else if (free_next > schedule.cool_sp_c[t]) {
      const double hold = C * (schedule.cool_sp_c[t] - temp) / dt - loss_w;
      q = -std::min(params.cool_capacity_w, -hold);
    }
    r.indoor_temp_c[t] = temp;
    r.hvac_thermal_w[t] = q;
    const double cop = q >= 0.0 ? params.cop_heat : params.cop_cool;
    r.electrical_kwh[t] = std::abs(q) * dt / cop / kJoulesPerKwh;
    temp = temp + dt / C * (loss_w + q);
  }
  r.final_temp_c = temp;
  accumulate_monthly(r);
  return r;
}

SimResult degree_minutes_energy(const SetpointSchedule& schedule, const WeatherSeries& weather,
                                const DegreeMinuteParams& params) {
  params.validate();
  require_same_grid(schedule.grid, weather.grid, "degree_minutes_energy");
  const double dt = schedule.grid.step_seconds();
  const std::size_t n = schedule.grid.n_steps;
  SimResult r{schedule.room_id, schedule.grid, std::vector<double>(n), 0.0, std::vector<double>(n),
              std::vector<double>(n), {}};
  for (std::size_t t = 0; t < n; ++t) {
    const double t_out = weather.outdoor_temp_c[t];
    const double heat_w = params.ua_w_per_k * std::max(0.0, schedule.heat_sp_c[t] - t_out);
    const double cool_w = params.ua_w_per_k * std::max(0.0, t_out - schedule.cool_sp_c[t]);
    r.hvac_thermal_w[t] = heat_w - cool_w;
    r.electrical_kwh[t] = (heat_w / params.cop_heat + cool_w / params.cop_cool) * dt / kJoulesPerKwh;
    r.indoor_temp_c[t] = std::clamp(t_out, schedule.heat_sp_c[t], schedule.cool_sp_c[t]);
  }
  r.final_temp_c = n ? r.indoor_temp_c.back() : 0.0;
  accumulate_monthly(r);
  return r;
}

double energy_conservation_check(const SimResult& result, const WeatherSeries& weather,
                                 const RoomThermalParams& params) {
  require_same_grid(result.grid, weather.grid, "energy_conservation_check");
  const double dt = result.grid.step_seconds();
  const double R = params.resistance_k_per_w;
  double flow = 0.0;
  double throughput = 0.0;
  for (std::size_t t = 0; t < result.grid.n_steps; ++t) {
    const double loss = (weather.outdoor_temp_c[t] - result.indoor_temp_c[t]) / R;
    flow += (result.hvac_thermal_w[t] + loss) * dt;
    throughput += (std::abs(result.hvac_thermal_w[t]) + std::abs(loss)) * dt;
  }
  const double stored = params.capacitance_j_per_k * (result.final_temp_c - result.indoor_temp_c.front());
  const double residual = std::abs(stored - flow);
  constexpr double kEpsilonJ = 1e-9;
  return throughput > kEpsilonJ ? residual / throughput : residual;
}

std::string format_thermal_trace(const SimResult& result, const WeatherSeries& weather) {
  std::string out = "timestamp,t_out_c,t_in_c,hvac_thermal_w,kwh_step\n";
  for (std::size_t t = 0; t < result.grid.n_steps; ++t) {
    out += format_timestamp(result.grid.at(t));
    for (double v : {weather.outdoor_temp_c[t], result.indoor_temp_c[t], result.hvac_thermal_w[t],
                     result.electrical_kwh[t]}) {
      out += ',';
      out += csv::format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hvacsim
