#include "hvacsim/time_grid.hpp"

#include <charconv>
#include <cstdio>

#include "hvacsim/error.hpp"

namespace hvacsim {

using namespace std::chrono;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OutOfRangeTemp: return "OutOfRangeTemp";
    case ErrorKind::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::LookaheadTooLong: return "LookaheadTooLong";
    case ErrorKind::QuotaInfeasible: return "QuotaInfeasible";
    case ErrorKind::DegenerateClass: return "DegenerateClass";
    case ErrorKind::MissingPrediction: return "MissingPrediction";
    case ErrorKind::UnstableStep: return "UnstableStep";
    case ErrorKind::ZeroBaseline: return "ZeroBaseline";
    case ErrorKind::InsufficientGrid: return "InsufficientGrid";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  const char* first = s.data() + pos;
  const char* last = first + len;
  for (const char* p = first; p != last; ++p) {
    if (*p < '0' || *p > '9') return false;
  }
  return std::from_chars(first, last, out).ec == std::errc{};
}

}  // namespace

LocalMinutes make_time(int year, unsigned month, unsigned day, int hour, int minute) {
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
  return LocalMinutes{local_days{ymd}.time_since_epoch()} + hours(hour) + minutes(minute);
}

LocalMinutes parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  const bool shape_ok = (text.size() == 16 || text.size() == 19) && text[4] == '-' &&
                        text[7] == '-' && (text[10] == 'T' || text[10] == ' ') && text[13] == ':';
  if (!shape_ok || !parse_fixed(text, 0, 4, y) || !parse_fixed(text, 5, 2, mo) ||
      !parse_fixed(text, 8, 2, d) || !parse_fixed(text, 11, 2, h) || !parse_fixed(text, 14, 2, mi)) {
    throw Error(ErrorKind::MalformedRow, "bad timestamp '" + std::string(text) + "'");
  }
  if (text.size() == 19) {
    if (text[16] != ':' || !parse_fixed(text, 17, 2, sec) || sec != 0) {
      throw Error(ErrorKind::MalformedRow, "timestamp must be minute-aligned: '" + std::string(text) + "'");
    }
  }
  const year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59) {
    throw Error(ErrorKind::MalformedRow, "invalid date/time '" + std::string(text) + "'");
  }
  return LocalMinutes{local_days{ymd}.time_since_epoch()} + hours(h) + minutes(mi);
}

std::string format_timestamp(LocalMinutes t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto mod = (t - day).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(mod / 60), static_cast<int>(mod % 60));
  return buf;
}

std::string month_key(LocalMinutes t) {
  const year_month_day ymd{floor<days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()));
  return buf;
}

int minute_of_day(LocalMinutes t) {
  return static_cast<int>((t - floor<days>(t)).count());
}

DayType day_type(LocalMinutes t) {
  const weekday wd{floor<days>(t)};
  return (wd == Saturday || wd == Sunday) ? DayType::Weekend : DayType::Weekday;
}

void TimeGrid::validate() const {
  if (step_minutes <= 0 || 1440 % step_minutes != 0) {
    throw Error(ErrorKind::GridMismatch, "step_minutes must divide 1440, got " + std::to_string(step_minutes));
  }
  if (n_steps == 0) throw Error(ErrorKind::GridMismatch, "grid has no steps");
  if (minute_of_day(start) % step_minutes != 0) {
    throw Error(ErrorKind::GridMismatch, "grid start " + format_timestamp(start) + " is not step-aligned");
  }
}

std::size_t TimeGrid::n_calendar_days() const {
  if (n_steps == 0) return 0;
  const auto first = floor<days>(start);
  const auto last = floor<days>(at(n_steps - 1));
  return static_cast<std::size_t>((last - first).count()) + 1;
}

std::vector<std::string> dst_transition_days(const TimeGrid& grid) {
  std::vector<std::string> out;
  if (grid.n_steps == 0) return out;
  const auto first = floor<days>(grid.start);
  const auto last = floor<days>(grid.at(grid.n_steps - 1));
  const int y0 = static_cast<int>(year_month_day(sys_days(first.time_since_epoch())).year());
  const int y1 = static_cast<int>(year_month_day(sys_days(last.time_since_epoch())).year());
  for (int y = y0; y <= y1; ++y) {
    const sys_days spring{year(y) / March / Sunday[2]};
    const sys_days autumn{year(y) / November / Sunday[1]};
    for (const sys_days d : {spring, autumn}) {
      const local_days ld{d.time_since_epoch()};
      if (ld >= first && ld <= last) out.push_back(format_timestamp(local_time<minutes>(ld)).substr(0, 10));
    }
  }
  return out;
}

std::string describe(const TimeGrid& grid) {
  return format_timestamp(grid.start) + " step=" + std::to_string(grid.step_minutes) +
         "min n=" + std::to_string(grid.n_steps);
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, std::string_view what) {
  if (!(a == b)) {
    throw Error(ErrorKind::GridMismatch,
                std::string(what) + ": grids differ (" + describe(a) + " vs " + describe(b) + ")");
  }
}

}  // namespace hvacsim
