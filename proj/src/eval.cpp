#include "dboost/eval.hpp"

#include <algorithm>
#include <ostream>

#include "dboost/kernels.hpp"

namespace dboost {

double Metrics::error_rate() const {
  return n == 0 ? 0.0 : 1.0 - static_cast<double>(first_correct) / static_cast<double>(n);
}

double Metrics::two_chance_error() const {
  return n == 0 ? 0.0 : 1.0 - static_cast<double>(two_chance_correct) / static_cast<double>(n);
}

std::vector<std::size_t> map_labels(const CountModel& model, const Dataset& ds) {
  if (!ds.empty() && ds.attribute_count() != model.attribute_count()) {
    throw SchemaError("dataset has " + std::to_string(ds.attribute_count()) +
                      " attributes, model expects " + std::to_string(model.attribute_count()));
  }
  const auto& names = model.classes();
  std::vector<std::size_t> remap(ds.class_count());
  for (std::size_t c = 0; c < ds.class_count(); ++c) {
    auto it = std::lower_bound(names.begin(), names.end(), ds.classes()[c]);
    remap[c] = it != names.end() && *it == ds.classes()[c]
                   ? static_cast<std::size_t>(it - names.begin())
                   : names.size();
  }
  std::vector<std::size_t> truth;
  truth.reserve(ds.size());
  for (const auto& e : ds) {
    if (remap[e.label] == names.size()) {
      throw SchemaError("label '" + ds.label_name(e) + "' is not a class of the model");
    }
    truth.push_back(remap[e.label]);
  }
  return truth;
}

Metrics tally(const CountModel& model, std::span<const std::size_t> truth,
              std::span<const Posterior> predictions) {
  Metrics m;
  m.classes = model.classes();
  const auto k = m.classes.size();
  m.confusion.assign(k * k, 0);
  m.n = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& p = predictions[i];
    const bool first = p.first == truth[i];
    if (first) ++m.first_correct;
    if (first || p.second == truth[i]) ++m.two_chance_correct;
    ++m.confusion[truth[i] * k + p.first];
  }
  return m;
}

Metrics evaluate(const CountModel& model, const Dataset& ds) {
  const auto truth = map_labels(model, ds);
  const auto predictions = predict_all(model, ds);
  return tally(model, truth, predictions);
}

Metrics evaluate_serial(const CountModel& model, const Dataset& ds) {
  const auto truth = map_labels(model, ds);
  const auto predictions = predict_all_serial(model, ds);
  return tally(model, truth, predictions);
}

void write_metrics(std::ostream& out, const Metrics& m) {
  out << "examples " << m.n << '\n'
      << "first_correct " << m.first_correct << '\n'
      << "two_chance_correct " << m.two_chance_correct << '\n'
      << "error_rate " << m.error_rate() << '\n'
      << "two_chance_error " << m.two_chance_error() << '\n'
      << "accuracy " << m.accuracy() << '\n'
      << "two_chance_accuracy " << m.two_chance_accuracy() << '\n';
}

void write_confusion_csv(std::ostream& out, const Metrics& m) {
  out << "truth";
  for (const auto& c : m.classes) out << ',' << c;
  out << '\n';
  const auto k = m.classes.size();
  for (std::size_t t = 0; t < k; ++t) {
    out << m.classes[t];
    for (std::size_t p = 0; p < k; ++p) out << ',' << m.confusion[t * k + p];
    out << '\n';
  }
}

}  // namespace dboost
