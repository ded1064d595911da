// Parallel kernels against their serial references on the letters data.
// Falls back to a synthetic 20,000-row set when the data file is missing.

#include <benchmark/benchmark.h>

#include <fstream>
#include <random>

#include "dboost/boost.hpp"
#include "dboost/kernels.hpp"

using namespace dboost;

namespace {

Dataset synthetic() {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> v(0, 15);
  std::vector<std::string> classes;
  for (char c = 'A'; c <= 'Z'; ++c) classes.emplace_back(1, c);
  std::vector<Example> rows(20000);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].label = i % classes.size();
    for (int j = 0; j < 16; ++j) rows[i].attributes.push_back(v(rng) + static_cast<int>(rows[i].label % 4));
  }
  return Dataset(std::move(classes), 16, std::move(rows));
}

struct Fixture {
  Dataset all;
  Dataset train_set;
  Dataset test_set;
  CountModel model;
  std::vector<std::size_t> labels;

  Fixture() : all(load()), train_set(all.rows(0, 16000)), test_set(all.rows(16000, all.size())) {
    TrainConfig cfg{.bins = 16};
    cfg.boost.max_rounds = 5;
    model = train(train_set, cfg).model;
    for (const auto& e : train_set) labels.push_back(e.label);
  }

  static Dataset load() {
    std::ifstream in(DBOOST_LETTERS_DATA);
    return in ? parse_letters(in) : synthetic();
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_predict_all(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(predict_all(f.model, f.test_set));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.test_set.size()));
}

void BM_predict_all_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(predict_all_serial(f.model, f.test_set));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.test_set.size()));
}

void BM_score_cache(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(ScoreCache(f.model, f.train_set));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.train_set.size()));
}

void BM_count_misclassified(benchmark::State& state) {
  const auto& f = fixture();
  const ScoreCache cache(f.model, f.train_set);
  for (auto _ : state) benchmark::DoNotOptimize(count_misclassified(f.model, cache, f.labels));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.train_set.size()));
}

void BM_count_misclassified_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(count_misclassified_serial(f.model, f.train_set));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.train_set.size()));
}

void BM_boost_epoch(benchmark::State& state) {
  const auto& f = fixture();
  const ScoreCache cache(f.model, f.train_set);
  for (auto _ : state) {
    auto m = f.model;
    benchmark::DoNotOptimize(boost_epoch(m, f.train_set, cache, {}));
  }
}

}  // namespace

BENCHMARK(BM_predict_all)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_predict_all_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_score_cache)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_misclassified)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_misclassified_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_boost_epoch)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
