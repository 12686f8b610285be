#pragma once

#include <map>
#include <string>
#include <vector>

#include "hvacsim/control.hpp"
#include "hvacsim/time_grid.hpp"
#include "hvacsim/trace.hpp"

namespace hvacsim {

// First-order room model: C dT/dt = (T_out - T)/R + Q.
// Capacities may be +infinity for an unconstrained plant.
struct RoomThermalParams {
  double resistance_k_per_w = 0.02;
  double capacitance_j_per_k = 2.0e6;
  double heat_capacity_w = 9000.0;
  double cool_capacity_w = 9000.0;
  double cop_heat = 1.0;
  double cop_cool = 3.0;
  double initial_temp_c = 20.0;

  double time_constant_s() const { return resistance_k_per_w * capacitance_j_per_k; }
  void validate() const;
};

// Energy is electrical energy; hvac_thermal_w is signed (+ heating, - cooling).
struct SimResult {
  std::string room_id;
  TimeGrid grid;
  std::vector<double> indoor_temp_c;  // temperature at the start of each step
  double final_temp_c = 0.0;          // temperature after the last step
  std::vector<double> hvac_thermal_w;
  std::vector<double> electrical_kwh;
  std::map<std::string, double> monthly_energy_kwh;  // "YYYY-MM" -> kWh

  double total_kwh() const;
};

SimResult simulate_room(const SetpointSchedule& schedule, const WeatherSeries& weather,
                        const RoomThermalParams& params);

// Steady-state envelope conductance model; no thermal mass.
struct DegreeMinuteParams {
  double ua_w_per_k = 50.0;
  double cop_heat = 1.0;
  double cop_cool = 3.0;

  void validate() const;
};

// Indoor temperatures are the setpoint being tracked, or the outdoor
// temperature when it already lies inside the active band.
SimResult degree_minutes_energy(const SetpointSchedule& schedule, const WeatherSeries& weather,
                                const DegreeMinuteParams& params);

// |C (T_end - T_start) - sum (Q + (T_out - T)/R) dt| divided by the total
// energy throughput sum (|Q| + |(T_out - T)/R|) dt; absolute when that is ~0.
double energy_conservation_check(const SimResult& result, const WeatherSeries& weather,
                                 const RoomThermalParams& params);

std::string format_thermal_trace(const SimResult& result, const WeatherSeries& weather);

}  // namespace hvacsim
