#include "dboost/boost.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "dboost/kernels.hpp"

namespace dboost {

void BoostConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
}

void TrainConfig::validate() const {
  if (bins < 1) throw std::invalid_argument("bin count must be at least 1");
  if (!(tags.gain > 0.0) || !std::isfinite(tags.gain)) {
    throw std::invalid_argument("window gain must be > 0");
  }
  boost.validate();
}

double delta_weight(double alpha, double p_true, double p_pred) {
  if (!(p_pred > 0.0)) throw std::invalid_argument("predicted-class probability must be positive");
  if (!(p_true >= 0.0) || p_true > p_pred || p_pred > 1.0) {
    throw std::invalid_argument("delta_weight needs 0 <= p_true <= p_pred <= 1");
  }
  return alpha * (1.0 - p_true / p_pred);
}

std::size_t boost_epoch(CountModel& model, const Dataset& train, const ScoreCache& cache,
                        const BoostConfig& cfg) {
  const auto m_count = model.attribute_count();
  std::vector<double> pending;
  if (cfg.mode == UpdateMode::batch) pending.assign(model.weights().size(), 0.0);

  std::size_t wrong = 0;
  std::vector<double> scores(model.class_count());
  for (std::size_t i = 0; i < train.size(); ++i) {
    cache.log_scores(model, i, scores);
    const auto p = make_posterior(scores);
    const auto truth = train[i].label;
    if (p.first == truth) continue;
    ++wrong;
    const double dw = delta_weight(cfg.alpha, p.probs[truth], p.probs[p.first]);
    const auto bins = cache.bins(i);
    for (std::size_t m = 0; m < m_count; ++m) {
      if (cfg.mode == UpdateMode::online) {
        model.add_weight(truth, m, bins[m], dw);
      } else {
        pending[model.cell(truth, m, bins[m])] += dw;
      }
    }
  }

  if (cfg.mode == UpdateMode::batch && wrong > 0) {
    auto w = model.weights();
    for (std::size_t c = 0; c < w.size(); ++c) w[c] += pending[c];
    model.set_weights(std::move(w));
  }
  return wrong;
}

std::size_t boost_epoch(CountModel& model, const Dataset& train, const BoostConfig& cfg) {
  return boost_epoch(model, train, ScoreCache(model, train), cfg);
}

TrainTrace boost(CountModel& model, const Dataset& train, const BoostConfig& cfg,
                 const EpochObserver& observer) {
  cfg.validate();
  const ScoreCache cache(model, train);
  std::vector<std::size_t> labels;
  labels.reserve(train.size());
  for (const auto& e : train) labels.push_back(e.label);

  TrainTrace trace;
  trace.initial_errors = count_misclassified(model, cache, labels);
  std::vector<double> best_weights = model.weights();
  std::size_t best_errors = trace.initial_errors;
  std::size_t best_epoch = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_rounds; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochRecord rec;
    rec.epoch = epoch;
    rec.misclassified = boost_epoch(model, train, cache, cfg);
    rec.errors_after = count_misclassified(model, cache, labels);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    trace.epochs.push_back(rec);
    trace.final_epoch = epoch;
    if (observer) observer(rec, model);

    if (rec.errors_after < best_errors) {
      best_errors = rec.errors_after;
      best_epoch = epoch;
      if (cfg.keep_best) best_weights = model.weights();
    }
    if (rec.misclassified == 0) {
      trace.converged = true;
      break;
    }
  }

  if (cfg.keep_best) {
    if (best_epoch != trace.final_epoch) model.set_weights(std::move(best_weights));
    trace.returned_epoch = best_epoch;
    trace.returned_errors = best_errors;
  } else {
    trace.returned_epoch = trace.final_epoch;
    trace.returned_errors = trace.epochs.empty() ? trace.initial_errors : trace.epochs.back().errors_after;
  }
  return trace;
}

TrainResult train(const Dataset& train, const TrainConfig& cfg, const EpochObserver& observer) {
  cfg.validate();
  if (train.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  BinGrid grid(attribute_ranges(train), cfg.bins);
  TrainResult result{CountModel::fit(train, std::move(grid), cfg.tags), {}};
  result.trace = boost(result.model, train, cfg.boost, observer);
  return result;
}

}  // namespace dboost
