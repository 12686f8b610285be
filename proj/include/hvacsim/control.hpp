#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hvacsim/predictor.hpp"
#include "hvacsim/time_grid.hpp"
#include "hvacsim/trace.hpp"

namespace hvacsim {

// Occupied heating/cooling setpoints plus a symmetric setback applied while
// the room is not conditioned.
struct BoundsPolicy {
  std::string name;
  double occupied_heat_sp_c = 20.0;
  double occupied_cool_sp_c = 24.0;
  double setback_delta_c = 2.0;

  double unoccupied_heat_sp_c() const { return occupied_heat_sp_c - setback_delta_c; }
  double unoccupied_cool_sp_c() const { return occupied_cool_sp_c + setback_delta_c; }
  void validate() const;
};

inline constexpr double kSmallSetbackC = 2.0;
inline constexpr double kMediumSetbackC = 6.0;
// The large setback is 10 C; some descriptions of the same policy quote 12 C,
// so it can be overridden wherever bounds are looked up by name.
inline constexpr double kLargeSetbackC = 10.0;

// Small (2 C), Medium (6 C), Large (10 C) around 20/24 C.
std::array<BoundsPolicy, 3> standard_bounds();
// Case-insensitive "small" | "medium" | "large".
BoundsPolicy bounds_by_name(std::string_view name, double large_setback_c = kLargeSetbackC);

enum class StrategyKind { Predictive, Reactive, Static, AlwaysOn };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view text);

struct StaticWindow {
  int start_minute = 6 * 60;
  int end_minute = 21 * 60;
};

struct Strategy {
  StrategyKind kind = StrategyKind::Reactive;
  StaticWindow window{};
};

struct SetpointSchedule {
  std::string room_id;
  TimeGrid grid;
  std::vector<double> heat_sp_c;
  std::vector<double> cool_sp_c;
  std::vector<std::uint8_t> conditioned;
};

// `pred` is required for Predictive and ignored otherwise.
SetpointSchedule build_schedule(const Strategy& strategy, const OccupancyTrace& truth, const PredictionTrace* pred,
                                const BoundsPolicy& bounds);

// `timestamp,heat_sp_c,cool_sp_c,conditioned`, one row per step.
std::string format_schedule(const SetpointSchedule& schedule);

}  // namespace hvacsim
