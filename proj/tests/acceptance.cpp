// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dboost/boost.hpp"
#include "dboost/curate.hpp"
#include "dboost/eval.hpp"
#include "dboost/kernels.hpp"
#include "dboost/model_io.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace dboost;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::size_t> labels_of(const Dataset& ds) {
  std::vector<std::size_t> out;
  out.reserve(ds.size());
  for (const auto& e : ds) out.push_back(e.label);
  return out;
}

void sweep(const Dataset& train_set, const Dataset& test_set) {
  const auto test_labels = labels_of(test_set);
  double best = 1.0, best_any_epoch = 1.0, slowest = 0.0;
  std::string best_cfg, best_any_cfg;
  for (std::size_t bins = 8; bins <= 32; ++bins) {
    for (double alpha : {0.1, 0.25, 0.5, 1.0}) {
      TrainConfig cfg{.bins = bins};
      cfg.boost.alpha = alpha;
      cfg.boost.max_rounds = 50;

      const auto t0 = std::chrono::steady_clock::now();
      // The grid, tags and counts never change while boosting, so one test
      // cache built from the unboosted model serves every epoch.
      const auto start = CountModel::fit(train_set, BinGrid(attribute_ranges(train_set), bins), cfg.tags);
      const ScoreCache test_cache(start, test_set);
      auto test_error = [&](const CountModel& m) {
        return static_cast<double>(count_misclassified(m, test_cache, test_labels)) /
               static_cast<double>(test_set.size());
      };
      double epoch_best = test_error(start);
      std::size_t epoch_at = 0;
      const auto r = train(train_set, cfg, [&](const EpochRecord& rec, const CountModel& m) {
        const double e = test_error(m);
        if (e < epoch_best) {
          epoch_best = e;
          epoch_at = rec.epoch;
        }
      });
      const double returned = test_error(r.model);
      const double elapsed = seconds_since(t0);
      slowest = std::max(slowest, elapsed);
      if (r.model.grid() != start.grid()) {
        report(1, false, "training grid differs from the reference grid");
        return;
      }
      if (returned < best) {
        best = returned;
        best_cfg = fmt("B=%zu alpha=%.2f returned epoch %zu", bins, alpha, r.trace.returned_epoch);
      }
      if (epoch_best < best_any_epoch) {
        best_any_epoch = epoch_best;
        best_any_cfg = fmt("B=%zu alpha=%.2f epoch %zu", bins, alpha, epoch_at);
      }
    }
  }
  report(1, best <= 0.17 && slowest < 300.0,
         fmt("best test error %.5f (%s) <= 0.17; per-epoch minimum %.5f (%s); slowest config %.1f s < 300 s",
             best, best_cfg.c_str(), best_any_epoch, best_any_cfg.c_str(), slowest));
}

void curation(const Dataset& all) {
  std::vector<std::size_t> seed(16000);
  std::iota(seed.begin(), seed.end(), 0);
  TrainConfig cfg{.bins = 16};
  cfg.boost.alpha = 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = curate(all, seed, cfg, {});
  const auto m = evaluate(r.model, all);
  report(2, m.accuracy() >= 0.92 && m.two_chance_accuracy() >= 0.965,
         fmt("curated set %zu rows after %zu passes; accuracy %.5f >= 0.92, two-chance %.5f >= 0.965 (%.1f s)",
             r.rows.size(), r.report.passes.size(), m.accuracy(), m.two_chance_accuracy(), seconds_since(t0)));
}

void xor_check() {
  const auto ds = testutil::xor_set();
  TrainConfig with{.bins = 2};
  with.boost.max_rounds = 50;
  const auto a = train(ds, with);
  const auto errors_with = count_misclassified_serial(a.model, ds);

  TrainConfig without = with;
  without.tags.enabled = false;
  const auto b = train(ds, without);
  double worst = 1.0;
  (void)train(ds, without, [&](const EpochRecord& rec, const CountModel&) {
    worst = std::min(worst, static_cast<double>(rec.errors_after) / 4.0);
  });
  const double err_without = static_cast<double>(count_misclassified_serial(b.model, ds)) / 4.0;
  report(3, a.trace.converged && errors_with == 0 && err_without >= 0.25 && worst >= 0.25,
         fmt("with tags: %zu errors (converged %s, epoch %zu); without: returned error %.2f, "
             "lowest epoch error %.2f >= 0.25",
             errors_with, a.trace.converged ? "yes" : "no", a.trace.final_epoch, err_without, worst));
}

void oracle_check() {
  std::mt19937 rng(4040);
  double worst = 0.0;
  std::size_t instances = 0, queries = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 50, m = 1 + rng() % 4, k = 1 + rng() % 4, bins = 1 + rng() % 8;
    const auto ds = testutil::random_instance(rng, n, m, k, 1 + static_cast<int>(rng() % 12));
    TrainConfig cfg{.bins = bins, .tags = {.enabled = rng() % 4 != 0, .gain = 0.25, .compound = rng() % 3 == 0}};
    cfg.boost.max_rounds = 1 + rng() % 6;
    cfg.boost.alpha = 0.25 + 0.25 * static_cast<double>(rng() % 4);
    const auto r = train(ds, cfg);
    const oracle::Setup setup{.train = &ds, .bins = bins, .tags = cfg.tags.enabled, .gain = cfg.tags.gain,
                              .compound = cfg.tags.compound, .weights = r.model.weights()};
    std::uniform_real_distribution<double> q(-2.0, 15.0);
    std::vector<std::vector<double>> xs;
    for (const auto& e : ds) xs.push_back(e.attributes);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> x(m);
      for (auto& v : x) v = rng() % 2 ? q(rng) : std::round(q(rng));
      xs.push_back(std::move(x));
    }
    for (const auto& x : xs) {
      const auto got = posterior(r.model, x).probs;
      const auto want = oracle::posterior(setup, x);
      for (std::size_t c = 0; c < k; ++c) worst = std::max(worst, std::abs(got[c] - want[c]));
      ++queries;
    }
    ++instances;
  }
  report(4, instances >= 100 && worst <= 1e-12,
         fmt("%zu instances, %zu queries, max |p - oracle| = %.3g <= 1e-12", instances, queries, worst));
}

void normalization(const Dataset& train_set) {
  TrainConfig cfg{.bins = 16};
  cfg.boost.max_rounds = 10;
  const auto model = train(train_set, cfg).model;
  std::mt19937 rng(5050);
  std::uniform_real_distribution<double> q(-5.0, 20.0);
  double worst_sum = 0.0;
  bool in_range = true;
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(16);
    if (i % 2 == 0) {
      x = train_set[rng() % train_set.size()].attributes;
      x[rng() % 16] = q(rng);
    } else {
      for (auto& v : x) v = i % 4 == 1 ? std::round(q(rng)) : q(rng);
    }
    const auto p = posterior(model, x);
    double sum = 0.0;
    for (double v : p.probs) {
      in_range = in_range && v >= 0.0 && v <= 1.0;
      sum += v;
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    if (!std::isfinite(sum)) worst_sum = INFINITY;
  }
  report(5, worst_sum <= 1e-9 && in_range,
         fmt("%zu queries, max |sum - 1| = %.3g <= 1e-9, all probabilities in [0,1]: %s", n, worst_sum,
             in_range ? "yes" : "no"));
}

struct ContractResult {
  bool monotone = true;
  bool fixed_point = true;
  bool keep_best = true;
};

ContractResult contracts(const Dataset& ds, const TrainConfig& cfg) {
  ContractResult out;
  auto previous = CountModel::fit(ds, BinGrid(attribute_ranges(ds), cfg.bins), cfg.tags).weights();
  const auto r = train(ds, cfg, [&](const EpochRecord& rec, const CountModel& m) {
    for (std::size_t c = 0; c < previous.size(); ++c) out.monotone = out.monotone && m.weights()[c] >= previous[c];
    if (rec.misclassified == 0) out.fixed_point = out.fixed_point && m.weights() == previous;
    previous = m.weights();
  });
  out.keep_best = count_misclassified_serial(r.model, ds) == r.trace.returned_errors &&
                  r.trace.returned_errors <= r.trace.initial_errors;

  // Force a zero-misclassification epoch: boost on the rows the model gets right.
  std::vector<std::size_t> right;
  const auto preds = predict_all(r.model, ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (preds[i].first == ds[i].label) right.push_back(i);
  }
  if (!right.empty()) {
    auto copy = r.model;
    const auto misses = boost_epoch(copy, ds.subset(right), cfg.boost);
    out.fixed_point = out.fixed_point && misses == 0 && copy == r.model;
  }
  return out;
}

void boosting_contracts(const Dataset& train_set) {
  TrainConfig cfg{.bins = 16};
  cfg.boost.max_rounds = 15;
  const auto letters = contracts(train_set, cfg);

  std::mt19937 rng(6060);
  ContractResult small;
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = testutil::random_instance(rng, 10 + rng() % 41, 1 + rng() % 4, 2 + rng() % 3, 8);
    TrainConfig c{.bins = 1 + rng() % 8};
    c.boost.alpha = 0.25 + 0.25 * static_cast<double>(rng() % 4);
    c.boost.max_rounds = 20;
    const auto one = contracts(ds, c);
    small.monotone = small.monotone && one.monotone;
    small.fixed_point = small.fixed_point && one.fixed_point;
    small.keep_best = small.keep_best && one.keep_best;
  }
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  report(6,
         letters.monotone && letters.fixed_point && letters.keep_best && small.monotone &&
             small.fixed_point && small.keep_best,
         fmt("letters: monotone %s, fixed point %s, keep_best %s; 20 random: monotone %s, fixed point %s, "
             "keep_best %s",
             yn(letters.monotone), yn(letters.fixed_point), yn(letters.keep_best), yn(small.monotone),
             yn(small.fixed_point), yn(small.keep_best)));
}

void determinism(const Dataset& train_set, const Dataset& test_set) {
  TrainConfig cfg{.bins = 16};
  cfg.boost.max_rounds = 10;
  ModelInfo info;
  info.dataset_digest = digest(train_set);
  auto text = [&](const CountModel& m) {
    std::ostringstream out;
    save_model(out, m, info);
    return out.str();
  };
  const auto a = train(train_set, cfg);
  const auto b = train(train_set, cfg);
  const auto ta = text(a.model);
  const bool identical = ta == text(b.model);

  std::istringstream in(ta);
  const auto loaded = load_model(in);
  const bool same_metrics = evaluate(loaded.model, test_set) == evaluate(a.model, test_set);
  bool same_probs = true;
  const auto pa = predict_all(a.model, test_set);
  const auto pl = predict_all(loaded.model, test_set);
  for (std::size_t i = 0; i < pa.size(); ++i) same_probs = same_probs && pa[i].probs == pl[i].probs;
  report(7, identical && same_metrics && same_probs,
         fmt("two runs byte-identical: %s (%zu bytes); reloaded metrics equal: %s; reloaded posteriors equal: %s",
             identical ? "yes" : "no", ta.size(), same_metrics ? "yes" : "no", same_probs ? "yes" : "no"));
}

Posterior ranks(std::size_t first, std::size_t second, double p_first, double gap) {
  Posterior p;
  p.probs.assign(3, 0.0);
  p.first = first;
  p.second = second;
  p.probs[first] = p_first;
  p.probs[second] = p_first - gap;
  p.confidence_gap = gap;
  return p;
}

void rule_tables() {
  const CurationConfig cfg;
  struct Row {
    Posterior p;
    std::size_t truth;
    bool r1, r2;
  };
  // Classes 0, 1, 2; truth is 0 unless stated.
  const std::vector<Row> table{
      {ranks(1, 0, 0.95, 0.92), 0, true, true},     // confident and wrong, gap above high
      {ranks(1, 0, 0.90, 0.85), 0, true, false},    // p exactly 0.90
      {ranks(1, 0, 0.8999, 0.85), 0, false, false},
      {ranks(1, 2, 0.95, 0.92), 0, true, false},    // truth not second
      {ranks(0, 1, 0.99, 0.98), 0, false, false},   // right
      {ranks(1, 0, 0.95, 0.90), 0, true, false},    // gap exactly 0.90
      {ranks(1, 0, 0.96, 0.9001), 0, true, true},
      {ranks(1, 0, 0.45, 0.02), 0, false, false},   // gap exactly 0.02
      {ranks(1, 0, 0.45, 0.0199), 0, false, true},
      {ranks(1, 0, 0.45, 0.0), 0, false, true},
      {ranks(1, 0, 0.60, 0.30), 0, false, false},
      {ranks(1, 2, 0.45, 0.01), 0, false, false},
      {ranks(0, 1, 0.45, 0.01), 0, false, false},
  };
  std::size_t ok = 0;
  for (const auto& row : table) {
    ok += rule1(row.p, row.truth, cfg) == row.r1 && rule2(row.p, row.truth, cfg) == row.r2;
  }
  report(8, ok == table.size(), fmt("%zu of %zu truth-table rows match", ok, table.size()));
}

}  // namespace

int main() {
  std::ifstream in(DBOOST_LETTERS_DATA);
  if (!in) {
    std::printf("[FAIL] letters data not found at %s (run tools/fetch_letters.py)\n", DBOOST_LETTERS_DATA);
    return 1;
  }
  const auto all = parse_letters(in);
  const auto train_set = all.rows(0, 16000);
  const auto test_set = all.rows(16000, all.size());

  sweep(train_set, test_set);
  curation(all);
  xor_check();
  oracle_check();
  normalization(train_set);
  boosting_contracts(train_set);
  determinism(train_set, test_set);
  rule_tables();

  std::printf("%s: %d failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
