#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvacsim/stats.hpp"
#include "hvacsim/thermal.hpp"
#include "hvacsim/trace.hpp"

namespace hvacsim {

enum class ComfortMode { Band, FixedPoint };

std::string_view to_string(ComfortMode mode);
ComfortMode parse_comfort_mode(std::string_view text);

struct ComfortConfig {
  ComfortMode mode = ComfortMode::Band;
  double fixed_comfort_temp_c = 20.0;
  double tolerance_c = 0.5;
  // Occupied band the Band mode checks against.
  double band_low_c = 20.0;
  double band_high_c = 24.0;

  void validate() const;
  bool comfortable(double indoor_c) const;
  ComfortConfig with_mode(ComfortMode m) const {
    ComfortConfig c = *this;
    c.mode = m;
    return c;
  }
};

// Minutes where the room is occupied but not comfortable.
double miss_minutes(const SimResult& result, const OccupancyTrace& truth, const ComfortConfig& cfg);
// Average daily MissTime over every calendar day of the grid.
double misstime(const SimResult& result, const OccupancyTrace& truth, const ComfortConfig& cfg);

// Identifies one simulated condition. fp/fn are unset for non-predictive strategies.
struct ConditionLabel {
  std::string strategy;
  std::optional<double> fp_rate;
  std::optional<double> fn_rate;
  std::string bounds;
  std::uint64_t seed = 0;

  // Filesystem-safe unique key, e.g. "predictive-fp15-fn05-small-s7".
  std::string key() const;
  bool is_predictive() const { return strategy == "predictive"; }
  friend bool operator==(const ConditionLabel&, const ConditionLabel&) = default;
};

// Per-room results reduced to what reporting needs.
struct RoomRecord {
  std::string room_id;
  std::map<std::string, double> monthly_energy_kwh;
  double miss_minutes_band = 0.0;
  double miss_minutes_fixed = 0.0;
  double days = 0.0;
  double occ_fraction = 0.0;
  std::optional<RateReport> rates;

  double energy_kwh() const;
};

RoomRecord make_room_record(const SimResult& result, const OccupancyTrace& truth, const ComfortConfig& comfort,
                            std::optional<RateReport> rates);

struct MissTimeStats {
  double mean = 0.0;    // mean over rooms of per-room average daily minutes
  double sd = 0.0;      // population SD over rooms
  double pooled = 0.0;  // all miss minutes over all room-days
};

struct RunMetrics {
  ConditionLabel label;
  double total_energy_kwh = 0.0;
  std::map<std::string, double> monthly_energy_kwh;
  std::map<std::string, double> per_room_energy_kwh;
  MissTimeStats misstime_band;
  MissTimeStats misstime_fixed;
  ComfortMode comfort_mode = ComfortMode::Band;
  std::optional<double> realized_fp_rate;  // pooled over rooms
  std::optional<double> realized_fn_rate;
  std::optional<BuildingAccuracy> accuracy;
  double mean_occ_fraction = 0.0;

  const MissTimeStats& misstime() const {
    return comfort_mode == ComfortMode::Band ? misstime_band : misstime_fixed;
  }
};

RunMetrics aggregate(const ConditionLabel& label, const std::vector<RoomRecord>& rooms, ComfortMode mode);

RunMetrics aggregate(const ConditionLabel& label, const std::vector<SimResult>& results,
                     const std::vector<OccupancyTrace>& truths, const ComfortConfig& comfort,
                     const std::vector<RateReport>& rates);

// 100 * (baseline - candidate) / baseline; positive means the candidate saves energy.
double percent_savings(double candidate_kwh, double baseline_kwh);

}  // namespace hvacsim
