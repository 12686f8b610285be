#include "hvacsim/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hvacsim/error.hpp"
#include "hvacsim/rng.hpp"

namespace hvacsim {

void validate_lookahead(int lookahead_minutes, int step_minutes) {
  if (lookahead_minutes < 10 || lookahead_minutes % step_minutes != 0) {
    throw Error(ErrorKind::InvalidArgument, "lookahead must be >= 10 min and a multiple of the " +
                                                std::to_string(step_minutes) + "-min step, got " +
                                                std::to_string(lookahead_minutes));
  }
}

void ErrorModel::validate(int step_minutes) const {
  validate_lookahead(lookahead_minutes, step_minutes);
  for (double r : {fp_rate_target, fn_rate_target}) {
    if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidArgument, "error rates must be in [0,1)");
  }
  if (cluster_min_minutes <= 0 || cluster_min_minutes > cluster_max_minutes ||
      cluster_min_minutes % step_minutes != 0 || cluster_max_minutes % step_minutes != 0) {
    throw Error(ErrorKind::InvalidArgument, "cluster bounds must satisfy 0 < min <= max, both multiples of the step");
  }
}

PredictionTrace oracle_predictions(const OccupancyTrace& truth, int lookahead_minutes) {
  truth.validate();
  validate_lookahead(lookahead_minutes, truth.grid.step_minutes);
  const auto lead = static_cast<std::size_t>(lookahead_minutes / truth.grid.step_minutes);
  if (lead >= truth.grid.n_steps) {
    throw Error(ErrorKind::LookaheadTooLong, "lookahead covers the whole trace of '" + truth.room_id + "'");
  }
  PredictionTrace p{truth.room_id, truth.grid, lookahead_minutes, {}};
  p.predicted_occupied.assign(truth.occupied.begin() + static_cast<std::ptrdiff_t>(lead), truth.occupied.end());
  return p;
}

namespace {

struct PlacementContext {
  const OccupancyTrace& truth;
  const SlotWeights& weights;
  std::size_t lead;
  std::size_t valid;
};

// Places errors for one truth-at-horizon class. `horizon_occupied` selects the
// class: true places false negatives, false places false positives.
ClassPlacement place_class(const PlacementContext& ctx, bool horizon_occupied, double rate, const ErrorModel& model,
                           std::uint64_t stream_seed, std::vector<std::uint8_t>& flipped) {
  const auto& occ = ctx.truth.occupied;
  const auto& grid = ctx.truth.grid;
  auto in_class = [&](std::size_t t) { return (occ[t + ctx.lead] != 0) == horizon_occupied; };

  ClassPlacement out;
  std::vector<std::size_t> eligible;
  for (std::size_t t = 0; t < ctx.valid; ++t) {
    if (in_class(t)) eligible.push_back(t);
  }
  out.eligible = eligible.size();
  if (rate == 0.0) return out;
  if (eligible.empty()) {
    throw Error(ErrorKind::DegenerateClass, "room '" + ctx.truth.room_id + "' has no " +
                                                (horizon_occupied ? "occupied" : "unoccupied") +
                                                " horizon steps for a nonzero target rate");
  }
  out.target_steps = static_cast<std::size_t>(std::llround(rate * static_cast<double>(eligible.size())));
  if (out.target_steps > eligible.size()) {
    throw Error(ErrorKind::QuotaInfeasible, "target needs more error steps than eligible steps");
  }
  if (out.target_steps == 0) return out;

  Rng rng(stream_seed);

  // Weighted sampling without replacement (exponential keys): larger
  // log(u)/w comes first; zero-weight steps trail in random order.
  struct Keyed {
    double key;
    double tie;
    std::size_t t;
  };
  std::vector<Keyed> order;
  order.reserve(eligible.size());
  for (std::size_t t : eligible) {
    const std::size_t h = t + ctx.lead;
    const double p = ctx.weights.occ_prob(grid.slot_of(h), grid.day_type_of(h));
    double w = 1.0;
    if (horizon_occupied) w = 1.0 - p;
    else if (model.fp_weighting == FpWeighting::OccupancyLikelihood) w = p;
    const double u = rng.uniform_open();
    const double tie = rng.uniform();
    const double key = w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity();
    order.push_back({key, tie, t});
  }
  std::sort(order.begin(), order.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.tie != b.tie) return a.tie > b.tie;
    return a.t < b.t;
  });

  const int step = grid.step_minutes;
  const auto min_steps = static_cast<std::uint64_t>(model.cluster_min_minutes / step);
  const auto max_steps = static_cast<std::uint64_t>(model.cluster_max_minutes / step);

  for (const auto& k : order) {
    if (out.placed_steps == out.target_steps) break;
    if (flipped[k.t]) continue;
    const int length = static_cast<int>(min_steps + rng.below(max_steps - min_steps + 1));
    out.raw_cluster_steps.push_back(length);
    int covered = 0;
    for (int j = 0; j < length; ++j) {
      const std::size_t t = k.t + static_cast<std::size_t>(j);
      if (t >= ctx.valid || !in_class(t)) break;
      // Reactive fallback: a missed arrival stops mattering once the room is occupied.
      if (horizon_occupied && j > 0 && occ[t] != 0 && occ[t - 1] == 0) break;
      ++covered;
      if (!flipped[t]) {
        flipped[t] = 1;
        if (++out.placed_steps == out.target_steps) break;
      }
    }
    out.realized_cluster_steps.push_back(covered);
  }
  return out;
}

bool rate_within_tolerance(const ClassPlacement& c, double rate) {
  if (c.eligible == 0) return true;
  return std::abs(static_cast<double>(c.placed_steps) / static_cast<double>(c.eligible) - rate) <= kRateTolerance;
}

}  // namespace

PlacementResult place_errors(const PredictionTrace& oracle, const OccupancyTrace& truth, const SlotWeights& weights,
                             const ErrorModel& model) {
  truth.validate();
  require_same_grid(oracle.grid, truth.grid, "place_errors");
  model.validate(truth.grid.step_minutes);
  if (model.lookahead_minutes != oracle.lookahead_minutes) {
    throw Error(ErrorKind::InvalidArgument, "error model lookahead differs from the oracle trace lookahead");
  }
  if (weights.slots_per_day != truth.grid.slots_per_day()) {
    throw Error(ErrorKind::GridMismatch, "slot weights were computed on a different step");
  }

  const PlacementContext ctx{truth, weights, oracle.lookahead_steps(), oracle.valid_len()};
  std::vector<std::uint8_t> flipped(ctx.valid, 0);

  PlacementResult result;
  result.fn = place_class(ctx, true, model.fn_rate_target, model,
                          derive_seed(model.seed, "fn/" + truth.room_id), flipped);
  result.fp = place_class(ctx, false, model.fp_rate_target, model,
                          derive_seed(model.seed, "fp/" + truth.room_id), flipped);
  result.within_tolerance =
      rate_within_tolerance(result.fn, model.fn_rate_target) && rate_within_tolerance(result.fp, model.fp_rate_target);

  result.trace = oracle;
  for (std::size_t t = 0; t < ctx.valid; ++t) {
    if (flipped[t]) result.trace.predicted_occupied[t] = truth.occupied[t + ctx.lead] ? 0 : 1;
  }
  return result;
}

std::string format_predictions(const std::vector<PredictionTrace>& traces) {
  std::string out = "room_id,issue_timestamp,horizon_timestamp,predicted\n";
  for (const auto& p : traces) {
    const auto lead = p.lookahead_steps();
    for (std::size_t t = 0; t < p.valid_len(); ++t) {
      out += p.room_id + "," + format_timestamp(p.grid.at(t)) + "," + format_timestamp(p.grid.at(t + lead)) +
             (p.predicted_occupied[t] ? ",1\n" : ",0\n");
    }
  }
  return out;
}

ClusterLengthStats cluster_length_stats(const ErrorModel& model, std::size_t n_samples, int step_minutes) {
  if (n_samples < 1000) throw Error(ErrorKind::InvalidArgument, "cluster_length_stats needs at least 1000 samples");
  model.validate(step_minutes);
  const auto min_steps = static_cast<std::uint64_t>(model.cluster_min_minutes / step_minutes);
  const auto max_steps = static_cast<std::uint64_t>(model.cluster_max_minutes / step_minutes);
  Rng rng(derive_seed(model.seed, "cluster-lengths"));
  std::vector<double> minutes(n_samples);
  for (auto& m : minutes) m = static_cast<double>((min_steps + rng.below(max_steps - min_steps + 1)) * step_minutes);
  const auto ms = mean_sd(minutes);
  return {ms.mean, ms.sd};
}

}  // namespace hvacsim
