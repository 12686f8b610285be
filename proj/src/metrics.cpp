#include "hvacsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hvacsim/csv.hpp"
#include "hvacsim/error.hpp"

namespace hvacsim {

std::string_view to_string(ComfortMode mode) { return mode == ComfortMode::Band ? "band" : "fixed"; }

ComfortMode parse_comfort_mode(std::string_view text) {
  if (text == "band") return ComfortMode::Band;
  if (text == "fixed" || text == "fixed_point") return ComfortMode::FixedPoint;
  throw Error(ErrorKind::InvalidArgument, "unknown comfort mode '" + std::string(text) + "'");
}

void ComfortConfig::validate() const {
  if (!(tolerance_c >= 0.0)) throw Error(ErrorKind::InvalidArgument, "comfort tolerance must be non-negative");
  if (!(band_low_c < band_high_c)) throw Error(ErrorKind::InvalidArgument, "comfort band is empty");
  if (fixed_comfort_temp_c < band_low_c || fixed_comfort_temp_c > band_high_c) {
    throw Error(ErrorKind::InvalidArgument, "fixed comfort temperature must lie inside the occupied band");
  }
}

bool ComfortConfig::comfortable(double t) const {
  if (mode == ComfortMode::FixedPoint) return std::abs(t - fixed_comfort_temp_c) <= tolerance_c;
  return t >= band_low_c - tolerance_c && t <= band_high_c + tolerance_c;
}

double miss_minutes(const SimResult& result, const OccupancyTrace& truth, const ComfortConfig& cfg) {
  require_same_grid(result.grid, truth.grid, "misstime");
  cfg.validate();
  std::size_t missed = 0;
  for (std::size_t t = 0; t < truth.grid.n_steps; ++t) {
    if (truth.occupied[t] && !cfg.comfortable(result.indoor_temp_c[t])) ++missed;
  }
  return static_cast<double>(missed) * truth.grid.step_minutes;
}

double misstime(const SimResult& result, const OccupancyTrace& truth, const ComfortConfig& cfg) {
  return miss_minutes(result, truth, cfg) / static_cast<double>(truth.grid.n_calendar_days());
}

std::string ConditionLabel::key() const {
  auto pct = [](double r) {
    std::string s = csv::format_double(std::round(r * 1e6) / 1e4);
    if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
    if (s.size() == 1) s.insert(0, "0");
    return s;
  };
  std::string k = strategy;
  if (fp_rate) k += "-fp" + pct(*fp_rate);
  if (fn_rate) k += "-fn" + pct(*fn_rate);
  k += "-" + bounds + "-s" + std::to_string(seed);
  return k;
}

double RoomRecord::energy_kwh() const {
  double sum = 0.0;
  for (const auto& [month, kwh] : monthly_energy_kwh) sum += kwh;
  return sum;
}

RoomRecord make_room_record(const SimResult& result, const OccupancyTrace& truth, const ComfortConfig& comfort,
                            std::optional<RateReport> rates) {
  RoomRecord rec;
  rec.room_id = result.room_id;
  rec.monthly_energy_kwh = result.monthly_energy_kwh;
  rec.miss_minutes_band = miss_minutes(result, truth, comfort.with_mode(ComfortMode::Band));
  rec.miss_minutes_fixed = miss_minutes(result, truth, comfort.with_mode(ComfortMode::FixedPoint));
  rec.days = static_cast<double>(truth.grid.n_calendar_days());
  rec.occ_fraction = truth.occupied_fraction();
  rec.rates = std::move(rates);
  return rec;
}

namespace {

MissTimeStats miss_stats(const std::vector<RoomRecord>& rooms, bool band) {
  std::vector<double> per_room;
  double minutes = 0.0, days = 0.0;
  for (const auto& r : rooms) {
    const double m = band ? r.miss_minutes_band : r.miss_minutes_fixed;
    per_room.push_back(m / r.days);
    minutes += m;
    days += r.days;
  }
  const auto ms = mean_sd(per_room);
  return {ms.mean, ms.sd, days > 0.0 ? minutes / days : 0.0};
}

}  // namespace

RunMetrics aggregate(const ConditionLabel& label, const std::vector<RoomRecord>& rooms, ComfortMode mode) {
  if (rooms.empty()) throw Error(ErrorKind::EmptyInput, "aggregate needs at least one room");
  RunMetrics m;
  m.label = label;
  m.comfort_mode = mode;
  std::vector<RateReport> reports;
  ConfusionCounts pooled;
  double occ = 0.0;
  for (const auto& r : rooms) {
    double room_total = 0.0;
    for (const auto& [month, kwh] : r.monthly_energy_kwh) {
      m.monthly_energy_kwh[month] += kwh;
      room_total += kwh;
    }
    m.per_room_energy_kwh[r.room_id] = room_total;
    m.total_energy_kwh += room_total;
    occ += r.occ_fraction;
    if (r.rates) {
      reports.push_back(*r.rates);
      pooled += r.rates->counts;
    }
  }
  m.mean_occ_fraction = occ / static_cast<double>(rooms.size());
  m.misstime_band = miss_stats(rooms, true);
  m.misstime_fixed = miss_stats(rooms, false);
  if (!reports.empty()) {
    const auto overall = rate_report("", pooled);
    m.realized_fp_rate = overall.fp_rate;
    m.realized_fn_rate = overall.fn_rate;
    m.accuracy = building_accuracy(reports);
  }
  return m;
}

RunMetrics aggregate(const ConditionLabel& label, const std::vector<SimResult>& results,
                     const std::vector<OccupancyTrace>& truths, const ComfortConfig& comfort,
                     const std::vector<RateReport>& rates) {
  if (results.size() != truths.size() || (!rates.empty() && rates.size() != results.size())) {
    throw Error(ErrorKind::InvalidArgument, "aggregate: results, truths and rates must align");
  }
  std::vector<RoomRecord> rooms;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rooms.push_back(make_room_record(results[i], truths[i], comfort,
                                     rates.empty() ? std::nullopt : std::optional<RateReport>(rates[i])));
  }
  return aggregate(label, rooms, comfort.mode);
}

double percent_savings(double candidate_kwh, double baseline_kwh) {
  if (!(baseline_kwh > 0.0)) throw Error(ErrorKind::ZeroBaseline, "baseline energy must be positive");
  return 100.0 * (baseline_kwh - candidate_kwh) / baseline_kwh;
}

}  // namespace hvacsim
