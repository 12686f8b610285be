#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvacsim/stats.hpp"
#include "hvacsim/time_grid.hpp"
#include "hvacsim/trace.hpp"

namespace hvacsim {

// How false-positive seeds are weighted. False negatives always favour slots
// that are rarely occupied (weight 1 - p); the false-positive mirror favours
// slots that are usually occupied (weight p).
enum class FpWeighting { OccupancyLikelihood, Uniform };

struct ErrorModel {
  double fp_rate_target = 0.0;
  double fn_rate_target = 0.0;
  int lookahead_minutes = 60;
  int cluster_min_minutes = 5;
  int cluster_max_minutes = 60;
  std::uint64_t seed = 0;
  FpWeighting fp_weighting = FpWeighting::OccupancyLikelihood;

  // Throws InvalidArgument when a field is out of range for the given step.
  void validate(int step_minutes) const;
};

// Simulated predictor output. Entry t is the prediction issued at t about
// t + lookahead; issue times whose horizon falls off the grid are absent.
struct PredictionTrace {
  std::string room_id;
  TimeGrid grid;
  int lookahead_minutes = 0;
  std::vector<std::uint8_t> predicted_occupied;  // length valid_len()

  std::size_t lookahead_steps() const { return static_cast<std::size_t>(lookahead_minutes / grid.step_minutes); }
  std::size_t valid_len() const { return predicted_occupied.size(); }
  std::optional<bool> at(std::size_t t) const {
    if (t >= predicted_occupied.size()) return std::nullopt;
    return predicted_occupied[t] != 0;
  }
};

void validate_lookahead(int lookahead_minutes, int step_minutes);

PredictionTrace oracle_predictions(const OccupancyTrace& truth, int lookahead_minutes);

struct ClassPlacement {
  std::size_t eligible = 0;
  std::size_t target_steps = 0;   // round(rate * eligible)
  std::size_t placed_steps = 0;
  std::vector<int> raw_cluster_steps;       // drawn lengths, before truncation
  std::vector<int> realized_cluster_steps;  // lengths after truncation
};

struct PlacementResult {
  PredictionTrace trace;
  ClassPlacement fp;
  ClassPlacement fn;
  // False when whole-step rounding cannot land within 0.005 of a target.
  bool within_tolerance = true;
};

inline constexpr double kRateTolerance = 0.005;

// Injects clustered prediction errors into an oracle trace so that the
// realized FP and FN rates equal round(rate * eligible) / eligible.
PlacementResult place_errors(const PredictionTrace& oracle, const OccupancyTrace& truth, const SlotWeights& weights,
                             const ErrorModel& model);

// `room_id,issue_timestamp,horizon_timestamp,predicted` rows for valid issue times.
std::string format_predictions(const std::vector<PredictionTrace>& traces);

struct ClusterLengthStats {
  double mean_minutes = 0.0;
  double sd_minutes = 0.0;
};

// Empirical statistics of the raw (pre-truncation) cluster-length distribution.
ClusterLengthStats cluster_length_stats(const ErrorModel& model, std::size_t n_samples, int step_minutes = 5);

}  // namespace hvacsim
