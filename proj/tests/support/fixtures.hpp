#pragma once

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "hvacsim/error.hpp"
#include "hvacsim/time_grid.hpp"
#include "hvacsim/trace.hpp"

namespace fixture {

inline hvacsim::TimeGrid grid(std::size_t n_days, int step = 5, hvacsim::LocalMinutes start = hvacsim::make_time(2011, 11, 7)) {
  return hvacsim::TimeGrid{start, step, n_days * static_cast<std::size_t>(1440 / step)};
}

// Occupancy from a predicate on the timestamp of each step.
inline hvacsim::OccupancyTrace trace(const std::string& id, const hvacsim::TimeGrid& g,
                                     const std::function<bool(hvacsim::LocalMinutes)>& occupied) {
  hvacsim::OccupancyTrace t{id, g, std::vector<std::uint8_t>(g.n_steps, 0)};
  for (std::size_t i = 0; i < g.n_steps; ++i) t.occupied[i] = occupied(g.at(i)) ? 1 : 0;
  return t;
}

// Occupied [from_minute, to_minute) on weekdays.
inline hvacsim::OccupancyTrace office_hours(const std::string& id, const hvacsim::TimeGrid& g, int from_minute = 540,
                                            int to_minute = 1020) {
  return trace(id, g, [=](hvacsim::LocalMinutes t) {
    const int m = hvacsim::minute_of_day(t);
    return hvacsim::day_type(t) == hvacsim::DayType::Weekday && m >= from_minute && m < to_minute;
  });
}

inline hvacsim::WeatherSeries constant_weather(const hvacsim::TimeGrid& g, double temp_c) {
  return hvacsim::WeatherSeries{g, std::vector<double>(g.n_steps, temp_c)};
}

template <class F>
void expect_error(hvacsim::ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << hvacsim::to_string(kind);
  } catch (const hvacsim::Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(std::filesystem::temp_directory_path() /
              ("hvacsim-test-" + tag + "-" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixture
