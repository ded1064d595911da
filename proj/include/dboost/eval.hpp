#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dboost/bayes.hpp"
#include "dboost/dataset.hpp"

namespace dboost {

/// Accuracy-style figures counted over first and second guesses.
struct Metrics {
  std::vector<std::string> classes;  // the model's inventory
  std::size_t n = 0;
  std::size_t first_correct = 0;
  /// First or second guess correct.
  std::size_t two_chance_correct = 0;
  /// Row = truth, column = first guess; row-major K x K.
  std::vector<std::size_t> confusion;

  double error_rate() const;
  double two_chance_error() const;
  double accuracy() const { return 1.0 - error_rate(); }
  double two_chance_accuracy() const { return 1.0 - two_chance_error(); }
  std::size_t confusion_at(std::size_t truth, std::size_t predicted) const {
    return confusion[truth * classes.size() + predicted];
  }

  bool operator==(const Metrics&) const = default;
};

/// Model class index for every example of `ds`, matched by label name.
/// Throws SchemaError on an attribute-count mismatch or a label the model
/// does not know.
std::vector<std::size_t> map_labels(const CountModel& model, const Dataset& ds);

/// Tally predictions against model-indexed truth labels.
Metrics tally(const CountModel& model, std::span<const std::size_t> truth,
              std::span<const Posterior> predictions);

/// Parallel evaluation; aggregation is serial and order-independent.
Metrics evaluate(const CountModel& model, const Dataset& ds);
/// Reference path through the scalar posterior.
Metrics evaluate_serial(const CountModel& model, const Dataset& ds);

/// `key value` lines: n, correct counts, error rates, accuracies.
void write_metrics(std::ostream& out, const Metrics& m);
/// Header row of predicted labels, then one row per true label.
void write_confusion_csv(std::ostream& out, const Metrics& m);

}  // namespace dboost
