#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dboost/bins.hpp"
#include "dboost/dataset.hpp"

namespace dboost {

/// Occurrences of each (class, attribute, bin) among the training examples.
/// Layout: (k * M + m) * B + b.
struct CountTable {
  std::size_t classes = 0;
  std::size_t attributes = 0;
  std::size_t bins = 0;
  std::vector<std::uint32_t> counts;
  std::size_t total = 0;

  std::uint32_t at(std::size_t k, std::size_t m, std::size_t b) const {
    return counts[(k * attributes + m) * bins + b];
  }

  bool operator==(const CountTable&) const = default;
};

/// Throws std::invalid_argument for an empty training set.
CountTable count_table(const Dataset& train, const BinGrid& grid);

/// The trained classifier: bin grid, window tags, counts, and the boost
/// weights that scale every per-attribute likelihood. The class prior is
/// flat and cancels in normalization, so it is not stored.
class CountModel {
 public:
  CountModel() = default;

  /// Counts and tags from `train`; all weights start at 1.
  static CountModel fit(const Dataset& train, BinGrid grid, TagPolicy policy = {});

  /// Reassembles a model from stored parts. Validates shapes and weights >= 1.
  static CountModel from_parts(std::vector<std::string> classes, BinGrid grid, TagTable tags,
                               TagPolicy policy, CountTable counts, double epsilon,
                               std::vector<double> weights);

  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t class_count() const noexcept { return classes_.size(); }
  std::size_t attribute_count() const noexcept { return grid_.attribute_count(); }
  std::size_t bins() const noexcept { return grid_.bins(); }
  const BinGrid& grid() const noexcept { return grid_; }
  const TagTable& tags() const noexcept { return tags_; }
  const TagPolicy& policy() const noexcept { return policy_; }
  const CountTable& counts() const noexcept { return counts_; }
  std::size_t total() const noexcept { return counts_.total; }
  double epsilon() const noexcept { return epsilon_; }
  double prior() const noexcept { return 1.0 / static_cast<double>(classes_.size()); }

  std::size_t cell(std::size_t k, std::size_t m, std::size_t b) const {
    return (k * attribute_count() + m) * bins() + b;
  }

  /// N / total, or epsilon for an empty cell.
  double likelihood(std::size_t k, std::size_t m, std::size_t b) const;
  double weight(std::size_t k, std::size_t m, std::size_t b) const { return weights_[cell(k, m, b)]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Throws std::invalid_argument for a negative or non-finite delta.
  void add_weight(std::size_t k, std::size_t m, std::size_t b, double delta);
  /// Replaces the whole weight table (same shape, every entry >= 1).
  void set_weights(std::vector<double> weights);

  /// Sum over attributes of log(likelihood * window gain), in attribute order.
  double base_log_score(std::size_t k, std::span<const double> x,
                        std::span<const std::size_t> bins) const;
  /// Sum over attributes of log(weight), in attribute order.
  double weight_log_score(std::size_t k, std::span<const std::size_t> bins) const;

  bool operator==(const CountModel&) const = default;

 private:
  void refresh_logs();

  std::vector<std::string> classes_;
  BinGrid grid_;
  TagTable tags_;
  TagPolicy policy_;
  CountTable counts_;
  double epsilon_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> log_likelihood_;
  std::vector<double> log_weights_;
  double log_gain_ = 0.0;
};

/// Normalized class probabilities with the two best classes. Ties rank by
/// class-inventory order. With a single class, `second == first`.
struct Posterior {
  std::vector<double> probs;
  std::size_t first = 0;
  std::size_t second = 0;
  double confidence_gap = 0.0;
  /// Every score was zero or invalid; `probs` is uniform.
  bool underflow = false;
};

/// Normalizes per-class log scores (softmax with max subtraction).
Posterior make_posterior(std::span<const double> log_scores);

/// Throws SchemaError if `x` does not have the model's attribute count.
Posterior posterior(const CountModel& model, std::span<const double> x);
inline Posterior predict(const CountModel& model, std::span<const double> x) {
  return posterior(model, x);
}

/// Per-example bin assignments and base log scores of a dataset against a
/// model's grid, tags and counts. Only the weights change during boosting,
/// so a cache stays valid for the whole training run. Scores produced here
/// are bit-identical to `posterior`.
class ScoreCache {
 public:
  ScoreCache(const CountModel& model, const Dataset& ds);

  std::size_t size() const noexcept { return rows_; }
  std::span<const std::size_t> bins(std::size_t i) const {
    return {bins_.data() + i * attributes_, attributes_};
  }
  std::span<const double> base(std::size_t i) const {
    return {base_.data() + i * classes_, classes_};
  }

  void log_scores(const CountModel& model, std::size_t i, std::span<double> out) const;
  Posterior posterior(const CountModel& model, std::size_t i) const;

 private:
  std::size_t rows_ = 0;
  std::size_t attributes_ = 0;
  std::size_t classes_ = 0;
  std::vector<std::size_t> bins_;
  std::vector<double> base_;
};

}  // namespace dboost
