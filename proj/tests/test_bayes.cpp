#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dboost/bayes.hpp"
#include "dboost/boost.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace dboost;

namespace {

CountModel fit(const Dataset& ds, std::size_t bins, TagPolicy policy = {}) {
  return CountModel::fit(ds, BinGrid(attribute_ranges(ds), bins), policy);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("count_table") {
  SUBCASE("single example") {
    const auto ds = testutil::make({{"A", {3, 5}}});
    BinGrid g({{0, 8}, {0, 8}}, 8);
    const auto t = count_table(ds, g);
    CHECK(t.total == 1);
    CHECK(t.at(0, 0, 3) == 0);  // 3 is the midpoint of centers 2.5 and 3.5
    CHECK(t.at(0, 0, 2) == 1);
    CHECK(t.at(0, 1, 4) == 1);
    CHECK(std::accumulate(t.counts.begin(), t.counts.end(), 0u) == 2);
  }
  SUBCASE("duplicating the data doubles every count") {
    std::mt19937 rng(1);
    const auto ds = testutil::random_instance(rng, 30, 3, 3, 7);
    std::vector<std::size_t> twice(60);
    for (std::size_t i = 0; i < 60; ++i) twice[i] = i % 30;
    BinGrid g(attribute_ranges(ds), 5);
    const auto a = count_table(ds, g);
    const auto b = count_table(ds.subset(twice), g);
    CHECK(b.total == 2 * a.total);
    for (std::size_t i = 0; i < a.counts.size(); ++i) CHECK(b.counts[i] == 2 * a.counts[i]);
  }
  SUBCASE("XOR counts by hand") {
    const auto ds = testutil::xor_set();
    const auto t = count_table(ds, BinGrid(attribute_ranges(ds), 2));
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t b = 0; b < 2; ++b) CHECK(t.at(k, m, b) == 1);
  }
  SUBCASE("per-attribute counts sum to the total") {
    std::mt19937 rng(2);
    const auto ds = testutil::random_instance(rng, 41, 4, 4, 9);
    const auto t = count_table(ds, BinGrid(attribute_ranges(ds), 6));
    for (std::size_t m = 0; m < 4; ++m) {
      std::size_t s = 0;
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t b = 0; b < 6; ++b) s += t.at(k, m, b);
      CHECK(s == 41);
    }
  }
  CHECK_THROWS_AS(count_table(Dataset({"A"}, 1, {}), BinGrid({{0, 1}}, 2)), std::invalid_argument);
}

TEST_CASE("likelihood and smoothing") {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (int i = 0; i < 5; ++i) rows.push_back({"A", {0}});
  for (int i = 0; i < 15; ++i) rows.push_back({"B", {1}});
  const auto ds = testutil::make(rows);
  const auto model = fit(ds, 2);
  CHECK(model.likelihood(0, 0, 0) == 0.25);
  CHECK(model.likelihood(1, 0, 1) == 0.75);
  CHECK(model.likelihood(0, 0, 1) == 1.0 / 40.0);
  CHECK(model.epsilon() == 1.0 / 40.0);
  CHECK(model.prior() == 0.5);

  const auto single = fit(testutil::make({{"A", {2}}, {"A", {2}}}), 1);
  CHECK(single.likelihood(0, 0, 0) == 1.0);
}

TEST_CASE("posterior edge cases") {
  SUBCASE("single class") {
    const auto model = fit(testutil::make({{"A", {1, 2}}, {"A", {3, 4}}}), 4);
    const auto p = posterior(model, std::vector<double>{9, 9});
    CHECK(p.probs == std::vector<double>{1.0});
    CHECK(p.first == 0);
    CHECK(p.second == 0);
    CHECK(p.confidence_gap == 0.0);
  }
  SUBCASE("mirror symmetry gives 0.5 / 0.5") {
    const auto model = fit(testutil::make({{"A", {0, 1}}, {"B", {1, 0}}}), 2);
    const auto p = posterior(model, std::vector<double>{0.5, 0.5});
    CHECK(p.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.probs[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("wrong attribute count") {
    const auto model = fit(testutil::make({{"A", {0, 1}}}), 2);
    CHECK_THROWS_AS(posterior(model, std::vector<double>{1}), SchemaError);
  }
}

TEST_CASE("posterior of a 6-example, 2-attribute, 3-class set matches direct enumeration") {
  const auto ds = testutil::make({{"A", {0, 0}}, {"A", {1, 0}}, {"B", {2, 2}},
                                  {"B", {3, 2}}, {"C", {0, 3}}, {"C", {3, 3}}});
  const auto model = fit(ds, 4);
  // Hand enumeration for x = (1, 2) with 4 bins on [0,3] (width 0.75):
  // x0=1 -> bin 1, x1=2 -> bin 2; total = 6, epsilon = 1/12.
  //  A: attr0 bin1 count 1 (from (1,0)); tag attr1 in [0,0], 2 outside -> 1/6 * 1/4
  //     attr1 bin2: no A example -> 1/12 * 1/4
  //  B: attr0 bin1 none -> 1/12 * 1/4; attr1 bin2 count 2; tag attr0 in [2,3], 1 outside -> 2/6 * 1/4
  //  C: attr0 bin1 none -> 1/12 * 1/4; attr1 bin2 none -> 1/12 * 1/4
  const double a = (1.0 / 6 / 4) * (1.0 / 12 / 4);
  const double b = (1.0 / 12 / 4) * (2.0 / 6 / 4);
  const double c = (1.0 / 12 / 4) * (1.0 / 12 / 4);
  const double z = a + b + c;
  const std::vector<double> x{1, 2};
  const auto p = posterior(model, x);
  CHECK(std::abs(p.probs[0] - a / z) < 1e-12);
  CHECK(std::abs(p.probs[1] - b / z) < 1e-12);
  CHECK(std::abs(p.probs[2] - c / z) < 1e-12);
  CHECK(p.first == 1);
  CHECK(p.second == 0);

  const auto o = oracle::posterior({.train = &ds, .bins = 4}, x);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(p.probs[k] - o[k]) < 1e-12);
}

TEST_CASE("posterior equals the brute-force oracle on random tiny instances") {
  std::mt19937 rng(20240611);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 50, m = 1 + rng() % 4, k = 1 + rng() % 4, bins = 1 + rng() % 8;
    const auto ds = testutil::random_instance(rng, n, m, k, 1 + static_cast<int>(rng() % 12));
    TagPolicy policy{.enabled = rng() % 4 != 0, .gain = 0.25, .compound = rng() % 3 == 0};
    auto model = fit(ds, bins, policy);
    if (trial % 2 == 0) {
      BoostConfig cfg{.alpha = 0.5, .max_rounds = 3, .keep_best = false};
      boost(model, ds, cfg);
    }
    oracle::Setup setup{.train = &ds, .bins = bins, .tags = policy.enabled, .gain = policy.gain,
                        .compound = policy.compound, .weights = model.weights()};
    std::uniform_real_distribution<double> q(-2.0, 15.0);
    for (int i = 0; i < 10; ++i) {
      std::vector<double> x(m);
      for (auto& v : x) v = i % 2 ? q(rng) : std::round(q(rng));
      const auto p = posterior(model, x);
      const auto o = oracle::posterior(setup, x);
      for (std::size_t c = 0; c < k; ++c) REQUIRE(std::abs(p.probs[c] - o[c]) < 1e-12);
    }
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("normalization, prior neutrality and weight monotonicity") {
  std::mt19937 rng(9);
  const auto ds = testutil::random_instance(rng, 40, 3, 4, 9);
  auto model = fit(ds, 5);
  std::uniform_real_distribution<double> q(-1.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x{q(rng), q(rng), q(rng)};
    const auto p = posterior(model, x);
    CHECK(std::abs(sum(p.probs) - 1.0) <= 1e-9);
    for (double v : p.probs) CHECK((v >= 0.0 && v <= 1.0));
  }

  // Adding the same log-constant to every class score changes nothing.
  const std::vector<double> scores{-3.0, -1.5, -7.25, -2.0};
  auto shifted = scores;
  for (auto& s : shifted) s += 123.0;
  const auto p1 = make_posterior(scores), p2 = make_posterior(shifted);
  CHECK(p1.first == p2.first);
  for (std::size_t c = 0; c < 4; ++c) CHECK(p1.probs[c] == doctest::Approx(p2.probs[c]).epsilon(1e-14));

  const std::vector<double> x{2, 2, 2};
  const auto bins = model.grid().assign(x);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t m = 0; m < 3; ++m) {
      auto bumped = model;
      const double before = posterior(bumped, x).probs[k];
      bumped.add_weight(k, m, bins[m], 0.75);
      CHECK(posterior(bumped, x).probs[k] > before);
    }
  }
}

TEST_CASE("predict ranks first and second with inventory-order ties") {
  SUBCASE("ordinary ranking") {
    const auto p = make_posterior(std::vector<double>{std::log(0.7), std::log(0.2), std::log(0.1)});
    CHECK(p.first == 0);
    CHECK(p.second == 1);
    CHECK(p.confidence_gap == doctest::Approx(0.5));
  }
  SUBCASE("exact tie picks the lower index") {
    const auto p = make_posterior(std::vector<double>{-1.0, -1.0, -5.0});
    CHECK(p.first == 0);
    CHECK(p.second == 1);
    CHECK(p.confidence_gap == 0.0);
  }
  SUBCASE("uniform over 26 classes") {
    const auto p = make_posterior(std::vector<double>(26, -4.0));
    CHECK(p.first == 0);
    CHECK(p.second == 1);
    CHECK(p.confidence_gap == 0.0);
  }
  SUBCASE("runner-up below a later top class") {
    const auto p = make_posterior(std::vector<double>{-2.0, -9.0, -1.0});
    CHECK(p.first == 2);
    CHECK(p.second == 0);
  }
  SUBCASE("all scores invalid -> uniform with the underflow flag") {
    const double ninf = -std::numeric_limits<double>::infinity();
    const auto p = make_posterior(std::vector<double>{ninf, ninf});
    CHECK(p.underflow);
    CHECK(p.probs == std::vector<double>{0.5, 0.5});
  }
}

TEST_CASE("ScoreCache reproduces the scalar posterior bit for bit") {
  std::mt19937 rng(13);
  const auto ds = testutil::random_instance(rng, 45, 4, 3, 11);
  auto model = fit(ds, 6);
  boost(model, ds, {.alpha = 1.0, .max_rounds = 4, .keep_best = false});
  const ScoreCache cache(model, ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto a = cache.posterior(model, i);
    const auto b = posterior(model, ds[i].attributes);
    CHECK(a.probs == b.probs);
    CHECK(a.first == b.first);
  }
}

TEST_CASE("set_weights and add_weight reject decreases") {
  auto model = fit(testutil::make({{"A", {0}}, {"B", {1}}}), 2);
  CHECK_THROWS_AS(model.add_weight(0, 0, 0, -0.1), std::invalid_argument);
  auto w = model.weights();
  w[0] = 0.5;
  CHECK_THROWS_AS(model.set_weights(w), std::invalid_argument);
}
