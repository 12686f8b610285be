#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hvacsim {

// Naive local wall-clock time at minute resolution. No time-zone or DST
// handling: consecutive samples are always step_minutes apart on the wall clock.
using LocalMinutes = std::chrono::local_time<std::chrono::minutes>;

enum class DayType { Weekday, Weekend };

// Accepts "YYYY-MM-DDTHH:MM", optionally followed by ":00", with 'T' or ' '.
LocalMinutes parse_timestamp(std::string_view text);
// Canonical form "YYYY-MM-DDTHH:MM".
std::string format_timestamp(LocalMinutes t);
// "YYYY-MM"
std::string month_key(LocalMinutes t);
int minute_of_day(LocalMinutes t);
DayType day_type(LocalMinutes t);
LocalMinutes make_time(int year, unsigned month, unsigned day, int hour = 0, int minute = 0);

struct TimeGrid {
  LocalMinutes start{};
  int step_minutes = 5;
  std::size_t n_steps = 0;

  // Throws GridMismatch unless step divides 1440, start is step-aligned and n_steps >= 1.
  void validate() const;

  LocalMinutes at(std::size_t i) const {
    return start + std::chrono::minutes(static_cast<std::int64_t>(i) * step_minutes);
  }
  LocalMinutes end() const { return at(n_steps); }
  int slots_per_day() const { return 1440 / step_minutes; }
  int slot_of(std::size_t i) const { return minute_of_day(at(i)) / step_minutes; }
  DayType day_type_of(std::size_t i) const { return day_type(at(i)); }
  double step_seconds() const { return 60.0 * step_minutes; }
  // Number of distinct calendar dates touched by the grid.
  std::size_t n_calendar_days() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

std::string describe(const TimeGrid& grid);

// Dates ("YYYY-MM-DD") inside the grid on which US daylight-saving time starts
// or ends. Samples stay on the naive wall clock; these days are only reported.
std::vector<std::string> dst_transition_days(const TimeGrid& grid);

// Throws GridMismatch naming `what` when the two grids differ.
void require_same_grid(const TimeGrid& a, const TimeGrid& b, std::string_view what);

}  // namespace hvacsim
