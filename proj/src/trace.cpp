#include "hvacsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"
#include "hvacsim/rng.hpp"

namespace hvacsim {

using namespace std::chrono;

void OccupancyTrace::validate() const {
  grid.validate();
  if (occupied.size() != grid.n_steps) {
    throw Error(ErrorKind::GridMismatch, "trace '" + room_id + "' has " + std::to_string(occupied.size()) +
                                             " samples for a grid of " + std::to_string(grid.n_steps));
  }
  for (auto v : occupied) {
    if (v > 1) throw Error(ErrorKind::MalformedRow, "trace '" + room_id + "' is not binary");
  }
}

double OccupancyTrace::occupied_fraction() const {
  if (occupied.empty()) return 0.0;
  const auto n = std::count(occupied.begin(), occupied.end(), std::uint8_t{1});
  return static_cast<double>(n) / static_cast<double>(occupied.size());
}

void WeatherSeries::validate() const {
  grid.validate();
  if (outdoor_temp_c.size() != grid.n_steps) {
    throw Error(ErrorKind::GridMismatch, "weather series length does not match its grid");
  }
  for (std::size_t i = 0; i < outdoor_temp_c.size(); ++i) {
    const double v = outdoor_temp_c[i];
    if (!std::isfinite(v) || v < -60.0 || v > 60.0) {
      throw Error(ErrorKind::OutOfRangeTemp,
                  "outdoor temperature " + csv::format_double(v) + " at " + format_timestamp(grid.at(i)));
    }
  }
}

namespace {

// Infers a single grid from a set of strictly increasing timestamp columns.
TimeGrid infer_grid(const std::vector<std::vector<LocalMinutes>>& columns, const std::vector<std::string>& names,
                    const std::optional<TimeGrid>& hint) {
  int step = hint ? hint->step_minutes : 0;
  if (step == 0) {
    for (const auto& col : columns) {
      if (col.size() >= 2) {
        step = static_cast<int>((col[1] - col[0]).count());
        break;
      }
    }
    if (step == 0) step = 5;
  }
  const TimeGrid grid{columns.front().front(), step, columns.front().size()};
  grid.validate();
  for (std::size_t r = 0; r < columns.size(); ++r) {
    const auto& col = columns[r];
    for (std::size_t i = 1; i < col.size(); ++i) {
      const auto diff = (col[i] - col[i - 1]).count();
      if (diff <= 0) {
        throw Error(ErrorKind::GridMismatch,
                    names[r] + ": timestamps not strictly increasing at " + format_timestamp(col[i]));
      }
      if (diff != step) {
        throw Error(ErrorKind::GridMismatch, names[r] + ": irregular interval of " + std::to_string(diff) +
                                                 " min at " + format_timestamp(col[i]));
      }
    }
    if (col.front() != grid.start || col.size() != grid.n_steps) {
      throw Error(ErrorKind::GridMismatch, names[r] + ": grid differs from " + names.front());
    }
  }
  if (hint) require_same_grid(*hint, grid, "loaded data vs expected grid");
  return grid;
}

}  // namespace

std::vector<OccupancyTrace> parse_occupancy(std::string_view content, const std::optional<TimeGrid>& grid_hint) {
  const auto rows = csv::lines(content);
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "occupancy file is empty");
  if (rows.front() != "room_id,timestamp,occupied") {
    throw Error(ErrorKind::MalformedRow, "expected header 'room_id,timestamp,occupied'");
  }
  std::vector<std::string> names;
  std::map<std::string, std::size_t, std::less<>> index;
  std::vector<std::vector<LocalMinutes>> times;
  std::vector<std::vector<std::uint8_t>> values;
  for (std::size_t line = 1; line < rows.size(); ++line) {
    const auto fields = csv::split(rows[line]);
    const std::string where = "line " + std::to_string(line + 1);
    if (fields.size() != 3 || fields[0].empty()) {
      throw Error(ErrorKind::MalformedRow, where + ": expected 3 fields");
    }
    if (fields[2] != "0" && fields[2] != "1") {
      throw Error(ErrorKind::MalformedRow, where + ": occupancy must be 0 or 1, got '" + std::string(fields[2]) + "'");
    }
    auto it = index.find(fields[0]);
    if (it == index.end()) {
      it = index.emplace(std::string(fields[0]), names.size()).first;
      names.emplace_back(fields[0]);
      times.emplace_back();
      values.emplace_back();
    }
    times[it->second].push_back(parse_timestamp(fields[1]));
    values[it->second].push_back(fields[2] == "1" ? 1 : 0);
  }
  if (names.empty()) throw Error(ErrorKind::EmptyInput, "occupancy file has no rows");
  const TimeGrid grid = infer_grid(times, names, grid_hint);
  std::vector<OccupancyTrace> out;
  out.reserve(names.size());
  for (std::size_t r = 0; r < names.size(); ++r) {
    out.push_back(OccupancyTrace{names[r], grid, std::move(values[r])});
  }
  return out;
}

std::vector<OccupancyTrace> load_occupancy(const std::filesystem::path& path, const std::optional<TimeGrid>& grid_hint) {
  return parse_occupancy(csv::read_file(path), grid_hint);
}

std::string format_occupancy(const std::vector<OccupancyTrace>& traces) {
  std::string out = "room_id,timestamp,occupied\n";
  for (const auto& tr : traces) {
    for (std::size_t i = 0; i < tr.grid.n_steps; ++i) {
      out += tr.room_id;
      out += ',';
      out += format_timestamp(tr.grid.at(i));
      out += tr.occupied[i] ? ",1\n" : ",0\n";
    }
  }
  return out;
}

void save_occupancy(const std::vector<OccupancyTrace>& traces, const std::filesystem::path& path) {
  csv::write_file(path, format_occupancy(traces));
}

WeatherSeries parse_weather(std::string_view content, const std::optional<TimeGrid>& expected) {
  const auto rows = csv::lines(content);
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "weather file is empty");
  if (rows.front() != "timestamp,temp_c") throw Error(ErrorKind::MalformedRow, "expected header 'timestamp,temp_c'");
  if (rows.size() < 2) throw Error(ErrorKind::EmptyInput, "weather file has no rows");
  std::vector<std::vector<LocalMinutes>> times(1);
  WeatherSeries ws;
  for (std::size_t line = 1; line < rows.size(); ++line) {
    const auto fields = csv::split(rows[line]);
    const std::string where = "line " + std::to_string(line + 1);
    if (fields.size() != 2) throw Error(ErrorKind::MalformedRow, where + ": expected 2 fields");
    times[0].push_back(parse_timestamp(fields[0]));
    ws.outdoor_temp_c.push_back(csv::parse_double(fields[1], where));
  }
  ws.grid = infer_grid(times, {"weather"}, expected);
  ws.validate();
  return ws;
}

WeatherSeries load_weather(const std::filesystem::path& path, const std::optional<TimeGrid>& expected) {
  return parse_weather(csv::read_file(path), expected);
}

std::string format_weather(const WeatherSeries& weather) {
  std::string out = "timestamp,temp_c\n";
  for (std::size_t i = 0; i < weather.grid.n_steps; ++i) {
    out += format_timestamp(weather.grid.at(i));
    out += ',';
    out += csv::format_double(weather.outdoor_temp_c[i]);
    out += '\n';
  }
  return out;
}

void save_weather(const WeatherSeries& weather, const std::filesystem::path& path) {
  csv::write_file(path, format_weather(weather));
}

// ---------------------------------------------------------------------------
// Synthetic occupancy

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be in [0,1]");
  }
}

// Normal draw truncated to [lo, hi) by rejection, clamped after a few misses.
double truncated_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double x = rng.normal(mean, sd);
    if (x >= lo && x < hi) return x;
  }
  return std::clamp(mean, lo, std::nextafter(hi, lo));
}

struct DayPlan {
  int first_slot = 0;  // inclusive
  int last_slot = 0;   // exclusive
  int lunch_first = 0;
  int lunch_last = 0;

  int occupied_slots() const {
    const int lunch = std::max(0, std::min(last_slot, lunch_last) - std::max(first_slot, lunch_first));
    return last_slot - first_slot - lunch;
  }
  bool occupied(int slot) const {
    return slot >= first_slot && slot < last_slot && !(slot >= lunch_first && slot < lunch_last);
  }
};

DayPlan draw_day(Rng& rng, const SynthOccupancyConfig& cfg, double shift) {
  const int step = cfg.step_minutes;
  const int spd = 1440 / step;
  const double arrive = truncated_normal(rng, cfg.arrival.mean_minute + shift, cfg.arrival.sd_minutes, 0.0, 1440.0);
  const double depart =
      truncated_normal(rng, cfg.departure.mean_minute + shift, cfg.departure.sd_minutes, arrive, 1440.0);
  DayPlan plan;
  plan.first_slot = std::clamp(static_cast<int>(std::lround(arrive / step)), 0, spd - 1);
  plan.last_slot = std::clamp(static_cast<int>(std::lround(depart / step)), plan.first_slot + 1, spd);
  const bool lunch = rng.bernoulli(cfg.lunch_gap_prob);
  const double lunch_at = rng.normal(cfg.lunch_start.mean_minute, cfg.lunch_start.sd_minutes);
  if (lunch && cfg.lunch_duration_minutes > 0) {
    plan.lunch_first = static_cast<int>(std::lround(lunch_at / step));
    plan.lunch_last = plan.lunch_first + cfg.lunch_duration_minutes / step;
  }
  return plan;
}

}  // namespace

void SynthOccupancyConfig::validate() const {
  if (n_rooms == 0 || n_days == 0) throw Error(ErrorKind::InvalidArgument, "n_rooms and n_days must be positive");
  TimeGrid{start, step_minutes, 1}.validate();
  if (minute_of_day(start) != 0) throw Error(ErrorKind::InvalidArgument, "synthetic traces must start at midnight");
  require_probability(weekday_presence_prob, "weekday_presence_prob");
  require_probability(weekend_presence_prob, "weekend_presence_prob");
  require_probability(lunch_gap_prob, "lunch_gap_prob");
  if (target_mean_occupancy) require_probability(*target_mean_occupancy, "target_mean_occupancy");
  if (!(room_activity_spread >= 0.0 && room_activity_spread < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "room_activity_spread must be in [0,1)");
  }
  if (arrival.sd_minutes < 0 || departure.sd_minutes < 0 || lunch_start.sd_minutes < 0 ||
      room_shift_sd_minutes < 0 || lunch_duration_minutes < 0) {
    throw Error(ErrorKind::InvalidArgument, "spreads and durations must be non-negative");
  }
  if (departure.mean_minute <= arrival.mean_minute) {
    throw Error(ErrorKind::InvalidArgument, "mean departure must be after mean arrival");
  }
}

SynthOccupancyConfig SynthOccupancyConfig::university_office(std::size_t n_rooms, std::size_t n_days,
                                                             std::uint64_t seed) {
  SynthOccupancyConfig cfg;
  cfg.n_rooms = n_rooms;
  cfg.n_days = n_days;
  cfg.seed = seed;
  cfg.target_mean_occupancy = 0.202;
  return cfg;
}

std::vector<OccupancyTrace> synth_occupancy(const SynthOccupancyConfig& cfg) {
  cfg.validate();
  const int spd = 1440 / cfg.step_minutes;
  const TimeGrid grid{cfg.start, cfg.step_minutes, cfg.n_days * static_cast<std::size_t>(spd)};
  const std::size_t n = cfg.n_rooms;

  std::vector<std::string> ids(n);
  for (std::size_t r = 0; r < n; ++r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "R%03zu", r + 1);
    ids[r] = buf;
  }

  // Evenly spread activity multipliers (mean exactly 1), shuffled over rooms.
  std::vector<double> activity(n);
  for (std::size_t j = 0; j < n; ++j) {
    activity[j] = 1.0 + cfg.room_activity_spread * (2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(n) - 1.0);
  }
  Rng shuffle_rng(derive_seed(cfg.seed, "activity"));
  for (std::size_t j = n; j > 1; --j) std::swap(activity[j - 1], activity[shuffle_rng.below(j)]);

  std::vector<double> shift(n);
  std::vector<double> present_fraction(n);
  for (std::size_t r = 0; r < n; ++r) {
    Rng room_rng(derive_seed(cfg.seed, "shift/" + ids[r]));
    shift[r] = room_rng.normal(0.0, cfg.room_shift_sd_minutes);
    // Expected occupied fraction of a day the occupant shows up.
    Rng cal(derive_seed(cfg.seed, "calibrate/" + ids[r]));
    constexpr int kCalibrationDays = 4000;
    double slots = 0.0;
    for (int d = 0; d < kCalibrationDays; ++d) slots += draw_day(cal, cfg, shift[r]).occupied_slots();
    present_fraction[r] = slots / (kCalibrationDays * static_cast<double>(spd));
  }

  std::vector<DayType> day_types(cfg.n_days);
  std::size_t weekdays = 0;
  for (std::size_t d = 0; d < cfg.n_days; ++d) {
    day_types[d] = day_type(cfg.start + days(d));
    if (day_types[d] == DayType::Weekday) ++weekdays;
  }
  const double weekend_days = static_cast<double>(cfg.n_days - weekdays);

  auto presence = [&](double scale, std::size_t r, DayType type) {
    const double p = type == DayType::Weekday ? cfg.weekday_presence_prob : cfg.weekend_presence_prob;
    return std::min(1.0, scale * p * activity[r]);
  };
  auto expected_occupancy = [&](double scale) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      sum += present_fraction[r] * (weekdays * presence(scale, r, DayType::Weekday) +
                                    weekend_days * presence(scale, r, DayType::Weekend));
    }
    return sum / (static_cast<double>(n) * static_cast<double>(cfg.n_days));
  };

  double scale = 1.0;
  if (cfg.target_mean_occupancy) {
    const double target = *cfg.target_mean_occupancy;
    const double pmin_positive = [&] {
      double m = 1.0;
      for (double p : {cfg.weekday_presence_prob, cfg.weekend_presence_prob}) {
        if (p > 0.0) m = std::min(m, p);
      }
      return m * (1.0 - cfg.room_activity_spread);
    }();
    const double saturated = 1.0 / pmin_positive;
    if (expected_occupancy(saturated) < target - 1e-12) {
      throw Error(ErrorKind::InfeasibleTarget,
                  "target occupancy " + csv::format_double(target) + " exceeds the reachable maximum " +
                      csv::format_double(expected_occupancy(saturated)));
    }
    double lo = 0.0, hi = saturated;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (expected_occupancy(mid) < target ? lo : hi) = mid;
    }
    scale = hi;
  }

  std::vector<OccupancyTrace> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    OccupancyTrace tr{ids[r], grid, std::vector<std::uint8_t>(grid.n_steps, 0)};
    Rng rng(derive_seed(cfg.seed, "days/" + ids[r]));
    for (std::size_t d = 0; d < cfg.n_days; ++d) {
      const bool present = rng.bernoulli(presence(scale, r, day_types[d]));
      const DayPlan plan = draw_day(rng, cfg, shift[r]);
      if (!present) continue;
      for (int s = plan.first_slot; s < plan.last_slot; ++s) {
        if (plan.occupied(s)) tr.occupied[d * spd + s] = 1;
      }
    }
    out.push_back(std::move(tr));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic weather

void SynthWeatherConfig::validate() const {
  if (n_days == 0) throw Error(ErrorKind::InvalidArgument, "n_days must be at least 1");
  TimeGrid{start, step_minutes, 1}.validate();
  if (diurnal_amplitude_c < 0 || noise_c < 0 || annual_amplitude_c < 0) {
    throw Error(ErrorKind::InvalidArgument, "weather amplitudes must be non-negative");
  }
  if (peak_minute_of_day < 0 || peak_minute_of_day >= 1440) {
    throw Error(ErrorKind::InvalidArgument, "peak_minute_of_day must be in [0,1440)");
  }
}

SynthWeatherConfig SynthWeatherConfig::pittsburgh_like(LocalMinutes start, std::size_t n_days, std::uint64_t seed) {
  SynthWeatherConfig cfg;
  cfg.start = start;
  cfg.n_days = n_days;
  cfg.seed = seed;
  return cfg;
}

WeatherSeries synth_weather(const SynthWeatherConfig& cfg) {
  cfg.validate();
  const auto steps_per_day = static_cast<std::size_t>(1440 / cfg.step_minutes);
  WeatherSeries ws;
  ws.grid = TimeGrid{cfg.start, cfg.step_minutes, cfg.n_days * steps_per_day};
  ws.outdoor_temp_c.resize(ws.grid.n_steps);

  Rng rng(derive_seed(cfg.seed, "weather"));
  constexpr double kPersistence = 0.97;
  double noise = cfg.noise_c * rng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < ws.grid.n_steps; ++i) {
    const auto t = ws.grid.at(i);
    const auto date = floor<days>(t);
    const year_month_day ymd{date};
    const double doy = static_cast<double>((date - local_days{ymd.year() / January / 1}).count() + 1);
    const double daily_mean =
        cfg.annual_mean_c -
        cfg.annual_amplitude_c * std::cos(2.0 * std::numbers::pi * (doy - cfg.coldest_day_of_year) / 365.25);
    const double phase = 2.0 * std::numbers::pi * (minute_of_day(t) - cfg.peak_minute_of_day) / 1440.0;
    // Convex combination keeps |noise| <= noise_c.
    noise = kPersistence * noise + (1.0 - kPersistence) * cfg.noise_c * rng.uniform(-1.0, 1.0);
    ws.outdoor_temp_c[i] = daily_mean + cfg.diurnal_amplitude_c * std::cos(phase) + noise;
  }
  ws.validate();
  return ws;
}

}  // namespace hvacsim
