#include "dboost/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dboost {

CountTable count_table(const Dataset& train, const BinGrid& grid) {
  if (train.empty()) throw std::invalid_argument("cannot count an empty training set");
  if (grid.attribute_count() != train.attribute_count()) {
    throw SchemaError("grid and training set disagree on attribute count");
  }
  CountTable t;
  t.classes = train.class_count();
  t.attributes = train.attribute_count();
  t.bins = grid.bins();
  t.counts.assign(t.classes * t.attributes * t.bins, 0);
  t.total = train.size();
  for (const auto& e : train) {
    for (std::size_t m = 0; m < t.attributes; ++m) {
      ++t.counts[(e.label * t.attributes + m) * t.bins + grid.bin_index(m, e.attributes[m])];
    }
  }
  return t;
}

CountModel CountModel::fit(const Dataset& train, BinGrid grid, TagPolicy policy) {
  auto counts = count_table(train, grid);
  auto tags = TagTable::build(train, grid);
  const double epsilon = 1.0 / (2.0 * static_cast<double>(counts.total));
  std::vector<double> weights(counts.counts.size(), 1.0);
  return from_parts(train.classes(), std::move(grid), std::move(tags), policy, std::move(counts),
                    epsilon, std::move(weights));
}

CountModel CountModel::from_parts(std::vector<std::string> classes, BinGrid grid, TagTable tags,
                                  TagPolicy policy, CountTable counts, double epsilon,
                                  std::vector<double> weights) {
  const auto k = classes.size();
  const auto m = grid.attribute_count();
  const auto b = grid.bins();
  if (k == 0) throw std::invalid_argument("model needs at least one class");
  if (counts.classes != k || counts.attributes != m || counts.bins != b ||
      counts.counts.size() != k * m * b) {
    throw std::invalid_argument("count table does not match the model shape");
  }
  if (tags.class_count() != k || tags.attribute_count() != m || tags.bins() != b) {
    throw std::invalid_argument("tag table does not match the model shape");
  }
  if (counts.total == 0) throw std::invalid_argument("model total must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(policy.gain > 0.0)) throw std::invalid_argument("window gain must be positive");

  CountModel model;
  model.classes_ = std::move(classes);
  model.grid_ = std::move(grid);
  model.tags_ = std::move(tags);
  model.policy_ = policy;
  model.counts_ = std::move(counts);
  model.epsilon_ = epsilon;
  model.weights_.assign(model.counts_.counts.size(), 1.0);
  model.set_weights(std::move(weights));

  model.log_likelihood_.resize(model.counts_.counts.size());
  for (std::size_t i = 0; i < model.log_likelihood_.size(); ++i) {
    const auto n = model.counts_.counts[i];
    model.log_likelihood_[i] =
        n > 0 ? std::log(static_cast<double>(n) / static_cast<double>(model.counts_.total))
              : std::log(model.epsilon_);
  }
  model.log_gain_ = std::log(policy.gain);
  return model;
}

double CountModel::likelihood(std::size_t k, std::size_t m, std::size_t b) const {
  const auto n = counts_.counts[cell(k, m, b)];
  return n > 0 ? static_cast<double>(n) / static_cast<double>(counts_.total) : epsilon_;
}

void CountModel::add_weight(std::size_t k, std::size_t m, std::size_t b, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("weight increments must be finite and non-negative");
  }
  const auto c = cell(k, m, b);
  weights_[c] += delta;
  log_weights_[c] = std::log(weights_[c]);
}

void CountModel::set_weights(std::vector<double> weights) {
  if (weights.size() != weights_.size()) throw std::invalid_argument("weight table shape mismatch");
  for (double w : weights) {
    if (!(w >= 1.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be >= 1");
  }
  weights_ = std::move(weights);
  refresh_logs();
}

void CountModel::refresh_logs() {
  log_weights_.resize(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) log_weights_[i] = std::log(weights_[i]);
}

double CountModel::base_log_score(std::size_t k, std::span<const double> x,
                                  std::span<const std::size_t> bins) const {
  double s = 0.0;
  for (std::size_t m = 0; m < bins.size(); ++m) {
    const auto b = bins[m];
    double term = log_likelihood_[cell(k, m, b)];
    if (policy_.enabled) {
      if (!tags_.occupied(k, m, b)) {
        term += log_gain_;
      } else if (const auto n = tags_.violations(k, m, b, x); n > 0) {
        term += policy_.compound ? log_gain_ * static_cast<double>(n) : log_gain_;
      }
    }
    s += term;
  }
  return s;
}

double CountModel::weight_log_score(std::size_t k, std::span<const std::size_t> bins) const {
  double s = 0.0;
  for (std::size_t m = 0; m < bins.size(); ++m) s += log_weights_[cell(k, m, bins[m])];
  return s;
}

Posterior make_posterior(std::span<const double> log_scores) {
  Posterior p;
  const auto k = log_scores.size();
  p.probs.assign(k, 0.0);
  if (k == 0) return p;

  double top = -std::numeric_limits<double>::infinity();
  for (double s : log_scores) {
    if (std::isnan(s)) {
      top = std::numeric_limits<double>::quiet_NaN();
      break;
    }
    top = std::max(top, s);
  }
  if (!std::isfinite(top)) {
    p.underflow = true;
    std::fill(p.probs.begin(), p.probs.end(), 1.0 / static_cast<double>(k));
  } else {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      p.probs[i] = std::exp(log_scores[i] - top);
      sum += p.probs[i];
    }
    for (auto& v : p.probs) v /= sum;
  }

  // Strict comparisons keep the lower index on ties.
  p.first = 0;
  for (std::size_t i = 1; i < k; ++i) {
    if (p.probs[i] > p.probs[p.first]) p.first = i;
  }
  p.second = p.first;
  if (k > 1) {
    p.second = p.first == 0 ? 1 : 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != p.first && p.probs[i] > p.probs[p.second]) p.second = i;
    }
  }
  p.confidence_gap = p.probs[p.first] - p.probs[p.second];
  return p;
}

Posterior posterior(const CountModel& model, std::span<const double> x) {
  if (x.size() != model.attribute_count()) {
    throw SchemaError("query has " + std::to_string(x.size()) + " attributes, model expects " +
                      std::to_string(model.attribute_count()));
  }
  const auto bins = model.grid().assign(x);
  std::vector<double> scores(model.class_count());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    scores[k] = model.base_log_score(k, x, bins) + model.weight_log_score(k, bins);
  }
  return make_posterior(scores);
}

ScoreCache::ScoreCache(const CountModel& model, const Dataset& ds)
    : rows_(ds.size()), attributes_(model.attribute_count()), classes_(model.class_count()) {
  if (ds.attribute_count() != attributes_ && !ds.empty()) {
    throw SchemaError("dataset has " + std::to_string(ds.attribute_count()) +
                      " attributes, model expects " + std::to_string(attributes_));
  }
  bins_.resize(rows_ * attributes_);
  base_.resize(rows_ * classes_);
  const auto n = static_cast<std::ptrdiff_t>(rows_);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto row = static_cast<std::size_t>(i);
    const auto& x = ds[row].attributes;
    std::span<std::size_t> bins(bins_.data() + row * attributes_, attributes_);
    model.grid().assign(x, bins);
    for (std::size_t k = 0; k < classes_; ++k) {
      base_[row * classes_ + k] = model.base_log_score(k, x, bins);
    }
  }
}

void ScoreCache::log_scores(const CountModel& model, std::size_t i, std::span<double> out) const {
  const auto b = bins(i);
  const auto s = base(i);
  for (std::size_t k = 0; k < classes_; ++k) out[k] = s[k] + model.weight_log_score(k, b);
}

Posterior ScoreCache::posterior(const CountModel& model, std::size_t i) const {
  std::vector<double> scores(classes_);
  log_scores(model, i, scores);
  return make_posterior(scores);
}

}  // namespace dboost
