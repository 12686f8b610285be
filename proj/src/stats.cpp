#include "hvacsim/stats.hpp"

#include <cmath>

#include "hvacsim/error.hpp"
#include "hvacsim/predictor.hpp"

namespace hvacsim {

SlotWeights compute_slot_weights(const OccupancyTrace& trace) {
  trace.validate();
  const int spd = trace.grid.slots_per_day();
  if (trace.grid.n_steps < static_cast<std::size_t>(spd)) {
    throw Error(ErrorKind::TooShort, "trace '" + trace.room_id + "' spans less than one full day");
  }
  std::vector<std::size_t> occ[2], total[2];
  for (int k = 0; k < 2; ++k) {
    occ[k].assign(spd, 0);
    total[k].assign(spd, 0);
  }
  for (std::size_t i = 0; i < trace.grid.n_steps; ++i) {
    const int k = trace.grid.day_type_of(i) == DayType::Weekday ? 0 : 1;
    const int s = trace.grid.slot_of(i);
    ++total[k][s];
    occ[k][s] += trace.occupied[i];
  }
  SlotWeights w{trace.room_id, spd, std::vector<double>(spd), std::vector<double>(spd)};
  for (int s = 0; s < spd; ++s) {
    w.weekday_occ_prob[s] = total[0][s] ? static_cast<double>(occ[0][s]) / static_cast<double>(total[0][s]) : 0.5;
    w.weekend_occ_prob[s] = total[1][s] ? static_cast<double>(occ[1][s]) / static_cast<double>(total[1][s]) : 0.5;
  }
  return w;
}

RateReport rate_report(std::string room_id, const ConfusionCounts& c) {
  RateReport r;
  r.room_id = std::move(room_id);
  r.counts = c;
  r.n_pred = c.total();
  r.n_truth_occ = c.tp + c.fn;
  r.n_truth_unocc = c.tn + c.fp;
  r.fp_rate = r.n_truth_unocc ? static_cast<double>(c.fp) / static_cast<double>(r.n_truth_unocc) : 0.0;
  r.fn_rate = r.n_truth_occ ? static_cast<double>(c.fn) / static_cast<double>(r.n_truth_occ) : 0.0;
  r.accuracy = r.n_pred ? static_cast<double>(c.tp + c.tn) / static_cast<double>(r.n_pred) : 0.0;
  return r;
}

RateReport measure_rates(const PredictionTrace& pred, const OccupancyTrace& truth) {
  require_same_grid(pred.grid, truth.grid, "measure_rates");
  const std::size_t lead = pred.lookahead_steps();
  ConfusionCounts c;
  for (std::size_t t = 0; t < pred.valid_len(); ++t) {
    const bool p = pred.predicted_occupied[t] != 0;
    const bool y = truth.occupied[t + lead] != 0;
    if (p && y) ++c.tp;
    else if (!p && !y) ++c.tn;
    else if (p) ++c.fp;
    else ++c.fn;
  }
  return rate_report(truth.room_id, c);
}

double expected_accuracy(double fp_rate, double fn_rate, double occ_fraction) {
  for (double v : {fp_rate, fn_rate, occ_fraction}) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, "rates and fractions must be in [0,1]");
  }
  return 1.0 - fp_rate * (1.0 - occ_fraction) - fn_rate * occ_fraction;
}

BuildingAccuracy building_accuracy(const std::vector<RateReport>& reports) {
  BuildingAccuracy out;
  if (reports.empty()) return out;
  ConfusionCounts pooled;
  double sum = 0.0;
  for (const auto& r : reports) {
    pooled += r.counts;
    sum += r.accuracy;
  }
  out.pooled = rate_report("", pooled).accuracy;
  out.room_mean = sum / static_cast<double>(reports.size());
  return out;
}

MeanSd mean_sd(const std::vector<double>& values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

OccupancySummary occupancy_summary(const std::vector<OccupancyTrace>& traces) {
  if (traces.empty()) throw Error(ErrorKind::EmptyInput, "occupancy_summary needs at least one trace");
  OccupancySummary s;
  std::vector<double> fractions;
  for (const auto& tr : traces) {
    const double f = tr.occupied_fraction();
    s.per_room.emplace_back(tr.room_id, f);
    fractions.push_back(f);
  }
  const auto ms = mean_sd(fractions);
  s.mean = ms.mean;
  s.sd = ms.sd;
  return s;
}

}  // namespace hvacsim
