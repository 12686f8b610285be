#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hvacsim/time_grid.hpp"

namespace hvacsim {

// Binary occupancy of one room on a fixed grid. 1 = occupied.
struct OccupancyTrace {
  std::string room_id;
  TimeGrid grid;
  std::vector<std::uint8_t> occupied;

  void validate() const;
  double occupied_fraction() const;
};

struct WeatherSeries {
  TimeGrid grid;
  std::vector<double> outdoor_temp_c;

  // Throws OutOfRangeTemp for non-finite values or values outside [-60, 60] C.
  void validate() const;
};

// Reads `room_id,timestamp,occupied`. Room order follows first appearance.
// When `grid_hint` is given, every room must match it exactly.
std::vector<OccupancyTrace> load_occupancy(const std::filesystem::path& path,
                                           const std::optional<TimeGrid>& grid_hint = std::nullopt);
std::vector<OccupancyTrace> parse_occupancy(std::string_view content,
                                            const std::optional<TimeGrid>& grid_hint = std::nullopt);
// Canonical encoding: header, then rows grouped by room in the given order.
std::string format_occupancy(const std::vector<OccupancyTrace>& traces);
void save_occupancy(const std::vector<OccupancyTrace>& traces, const std::filesystem::path& path);

// Reads `timestamp,temp_c`.
WeatherSeries load_weather(const std::filesystem::path& path,
                           const std::optional<TimeGrid>& expected = std::nullopt);
WeatherSeries parse_weather(std::string_view content,
                            const std::optional<TimeGrid>& expected = std::nullopt);
std::string format_weather(const WeatherSeries& weather);
void save_weather(const WeatherSeries& weather, const std::filesystem::path& path);

struct TimeOfDayDraw {
  double mean_minute = 0.0;
  double sd_minutes = 0.0;
};

struct SynthOccupancyConfig {
  std::size_t n_rooms = 20;
  std::size_t n_days = 28;
  LocalMinutes start = make_time(2011, 11, 7);
  int step_minutes = 5;

  TimeOfDayDraw arrival{9 * 60.0, 75.0};
  TimeOfDayDraw departure{18 * 60.0, 120.0};
  double weekday_presence_prob = 0.8;
  double weekend_presence_prob = 0.12;
  double lunch_gap_prob = 0.5;
  TimeOfDayDraw lunch_start{12 * 60.0, 25.0};
  int lunch_duration_minutes = 45;

  // Rooms differ by an activity multiplier spread evenly over
  // [1 - room_activity_spread, 1 + room_activity_spread] and by a schedule shift.
  double room_activity_spread = 0.3;
  double room_shift_sd_minutes = 45.0;

  // When set, presence probabilities are scaled by one common factor so the
  // expected building-wide occupied fraction equals this value.
  std::optional<double> target_mean_occupancy;
  std::uint64_t seed = 1;

  void validate() const;

  // University office building, calibrated to a 20.2% mean occupied fraction.
  static SynthOccupancyConfig university_office(std::size_t n_rooms, std::size_t n_days, std::uint64_t seed);
};

std::vector<OccupancyTrace> synth_occupancy(const SynthOccupancyConfig& cfg);

struct SynthWeatherConfig {
  LocalMinutes start = make_time(2011, 11, 7);
  std::size_t n_days = 28;
  int step_minutes = 5;
  // Seasonal daily mean: annual_mean - annual_amplitude * cos(2*pi*(doy - coldest_doy)/365.25).
  double annual_mean_c = 11.0;
  double annual_amplitude_c = 12.5;
  int coldest_day_of_year = 20;
  // Diurnal cosine peaking at peak_minute_of_day.
  double diurnal_amplitude_c = 5.0;
  int peak_minute_of_day = 15 * 60;
  // Bound on the smoothed noise term; |noise| <= noise_c always.
  double noise_c = 2.0;
  std::uint64_t seed = 1;

  void validate() const;

  static SynthWeatherConfig pittsburgh_like(LocalMinutes start, std::size_t n_days, std::uint64_t seed);
};

WeatherSeries synth_weather(const SynthWeatherConfig& cfg);

}  // namespace hvacsim
