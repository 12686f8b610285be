#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hvacsim/time_grid.hpp"
#include "hvacsim/trace.hpp"

namespace hvacsim {

struct PredictionTrace;

// Maximum-likelihood occupancy probability per time-of-day slot, split by day type.
struct SlotWeights {
  std::string room_id;
  int slots_per_day = 0;
  std::vector<double> weekday_occ_prob;
  std::vector<double> weekend_occ_prob;

  double occ_prob(int slot, DayType type) const {
    return type == DayType::Weekday ? weekday_occ_prob[slot] : weekend_occ_prob[slot];
  }
};

// Slots with no samples of a day type get 0.5. Throws TooShort below one full day.
SlotWeights compute_slot_weights(const OccupancyTrace& trace);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct RateReport {
  std::string room_id;
  double fp_rate = 0.0;   // FP / (FP + TN)
  double fn_rate = 0.0;   // FN / (FN + TP)
  double accuracy = 0.0;  // (TP + TN) / n_pred
  std::size_t n_pred = 0;
  std::size_t n_truth_occ = 0;
  std::size_t n_truth_unocc = 0;
  ConfusionCounts counts;
};

RateReport rate_report(std::string room_id, const ConfusionCounts& counts);

// Compares the prediction issued at t with the truth at t + lookahead, over
// every issue time whose horizon lies on the grid.
RateReport measure_rates(const PredictionTrace& pred, const OccupancyTrace& truth);

double expected_accuracy(double fp_rate, double fn_rate, double occ_fraction);

struct BuildingAccuracy {
  double pooled = 0.0;    // every prediction weighted equally
  double room_mean = 0.0; // every room weighted equally
};
BuildingAccuracy building_accuracy(const std::vector<RateReport>& reports);

struct OccupancySummary {
  std::vector<std::pair<std::string, double>> per_room;
  double mean = 0.0;
  double sd = 0.0;  // population SD across rooms
};

OccupancySummary occupancy_summary(const std::vector<OccupancyTrace>& traces);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};
// Population mean/SD; empty input gives {0, 0}.
MeanSd mean_sd(const std::vector<double>& values);

}  // namespace hvacsim
