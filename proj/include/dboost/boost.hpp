#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "dboost/bayes.hpp"
#include "dboost/bins.hpp"
#include "dboost/dataset.hpp"

namespace dboost {

enum class UpdateMode {
  /// Weights change as each misclassified example is visited.
  online,
  /// Increments accumulate over the epoch and are applied at its end.
  batch,
};

struct BoostConfig {
  double alpha = 0.5;
  std::size_t max_rounds = 30;
  /// Return the weights with the lowest training error seen, not the last ones.
  bool keep_best = true;
  UpdateMode mode = UpdateMode::online;

  /// Throws std::invalid_argument unless alpha > 0 and max_rounds >= 1.
  void validate() const;
};

struct TrainConfig {
  std::size_t bins = 16;
  TagPolicy tags;
  BoostConfig boost;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  /// First-guess errors counted as examples were visited.
  std::size_t misclassified = 0;
  /// Training error of the weights left at the end of the epoch.
  std::size_t errors_after = 0;
  double seconds = 0.0;
};

struct TrainTrace {
  /// Training error with all weights at 1.
  std::size_t initial_errors = 0;
  std::vector<EpochRecord> epochs;
  std::size_t final_epoch = 0;
  /// An epoch finished with no misclassified examples.
  bool converged = false;
  /// Epoch whose end-of-epoch weights were returned; 0 means the unboosted weights.
  std::size_t returned_epoch = 0;
  std::size_t returned_errors = 0;
};

/// `alpha * (1 - p_true / p_pred)`. Throws std::invalid_argument when
/// p_pred <= 0 or either probability is outside [0, 1].
double delta_weight(double alpha, double p_true, double p_pred);

/// One pass over `train` in order. Every example whose first guess is wrong
/// adds `delta_weight` to its true class's weight at each attribute's bin.
/// `cache` must be built from `model` and `train`. Returns the number of
/// misclassified examples at visit time.
std::size_t boost_epoch(CountModel& model, const Dataset& train, const ScoreCache& cache,
                        const BoostConfig& cfg);
std::size_t boost_epoch(CountModel& model, const Dataset& train, const BoostConfig& cfg);

struct TrainResult {
  CountModel model;
  TrainTrace trace;
};

/// Called after each epoch with the model's current (not kept-best) weights.
using EpochObserver = std::function<void(const EpochRecord&, const CountModel&)>;

/// Grid from the training ranges, then tags and counts, then boosting until
/// an epoch has no misclassified examples or `max_rounds` is reached.
/// Throws std::invalid_argument for an empty training set.
TrainResult train(const Dataset& train, const TrainConfig& cfg, const EpochObserver& observer = {});

/// Boosting only, on an already fitted model.
TrainTrace boost(CountModel& model, const Dataset& train, const BoostConfig& cfg,
                 const EpochObserver& observer = {});

}  // namespace dboost
