#include <doctest.h>

#include <cmath>
#include <random>
#include <type_traits>
#include <vector>

#include "numsim/error.hpp"
#include "numsim/ls_estimator.hpp"
#include "oracles.hpp"

using namespace numsim;

// Two sums and a counter, nothing per sample.
static_assert(sizeof(LsAggregates) == 2 * sizeof(double) + sizeof(std::int64_t));
static_assert(std::is_trivially_copyable_v<LsAggregates>);

TEST_CASE("observe and estimator") {
  LsAggregates agg;
  CHECK_FALSE(agg.has_estimate());
  CHECK_THROWS_AS(estimator(agg), InsufficientHistory);
  agg = observe(agg, 2.0, 6.0);
  CHECK(estimator(agg) == doctest::Approx(3.0));
  CHECK(agg.count() == 1);

  LsAggregates two;
  two = observe(observe(two, 1.0, 2.0), 2.0, 2.0);
  CHECK(estimator(two) == doctest::Approx(oracle::batch_ls({{1.0, 2.0}, {2.0, 2.0}})));
  CHECK(estimator(two) == doctest::Approx(1.2));

  CHECK_THROWS(agg.observe(0.0, 1.0));
  CHECK_THROWS(agg.observe(1.0, -1.0));
}

TEST_CASE("zero prices pull w toward zero") {
  LsAggregates agg;
  agg.observe(1.5, 0.4);
  agg.observe(2.0, 0.7);
  double prev = agg.estimate();
  for (int i = 0; i < 50; ++i) {
    agg.observe(1.0 + 0.1 * i, 0.0);
    CHECK(agg.estimate() < prev);
    CHECK(agg.estimate() > 0.0);
    prev = agg.estimate();
  }
}

TEST_CASE("predictions") {
  LsAggregates one;
  one.observe(2.0, 6.0);
  CHECK(predict_interval(one, 6.0) == doctest::Approx(2.0));

  LsAggregates two;
  two.observe(1.0, 2.0);
  two.observe(2.0, 2.0);
  CHECK(predict_interval(two, 3.0) == doctest::Approx(2.5));

  LsAggregates d1;
  d1.observe(5.0, 10.0);
  CHECK(predict_demand(d1, 10.0) == doctest::Approx(5.0));

  LsAggregates d2;
  d2.observe(5.0, 1.0);
  d2.observe(4.0, 1.0);
  CHECK(estimator(d2) == doctest::Approx(9.0 / 41.0));
  CHECK(predict_demand(d2, 1.0) == doctest::Approx(41.0 / 9.0));
  CHECK(predict_demand(d2, 1.0) == doctest::Approx(4.5556).epsilon(1e-4));

  LsAggregates zero;
  zero.observe(1.0, 0.0);
  CHECK_THROWS_AS(predict_interval(zero, 1.0), InsufficientHistory);
}

TEST_CASE("property: prediction is invariant to price scale") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double c = u(rng);
    LsAggregates a, b;
    const int n = 1 + static_cast<int>(u(rng) * 10);
    for (int i = 0; i < n; ++i) {
      const double h = u(rng);
      const double p = u(rng);
      a.observe(h, p);
      b.observe(h, c * p);
    }
    const double next = u(rng);
    CHECK(predict_interval(b, c * next) == doctest::Approx(predict_interval(a, next)));
  }
}

TEST_CASE("property: streaming estimate equals the batch closed form") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> len(1, 10000);
  std::uniform_real_distribution<double> h(0.01, 100.0), p(0.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<double, double>> hist;
    LsAggregates agg;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      hist.emplace_back(h(rng), p(rng));
      agg.observe(hist.back().first, hist.back().second);
    }
    const double batch = oracle::batch_ls(hist);
    CHECK(std::abs(agg.estimate() - batch) <= 1e-9 * std::abs(batch));
  }
}

TEST_CASE("window_stats") {
  const std::vector<WindowSample> hist{{10, 2.0, 2.1}, {11, 2.2, 2.1}};
  const auto s = window_stats(hist, 10, 11);
  CHECK(s.mean_abs_err == doctest::Approx(0.1));
  CHECK(s.mean_observed == doctest::Approx(2.1));
  CHECK(s.mean_predicted == doctest::Approx(2.1));
  CHECK(s.samples == 2);

  const std::vector<WindowSample> same{{0, 1.0, 1.0}, {1, 3.0, 3.0}, {2, 2.0, 2.0}};
  CHECK(window_stats(same, 0, 2).mean_abs_err == 0.0);
  CHECK(window_stats(hist, 11, 11).mean_abs_err == doctest::Approx(0.1));
  // samples outside the window are ignored, gaps do not dilute
  CHECK(window_stats(std::vector<WindowSample>{{3, 1.0, 2.0}, {9, 5.0, 5.0}}, 0, 5).mean_abs_err == 1.0);

  CHECK_THROWS(window_stats(hist, 20, 30));
  CHECK_THROWS(window_stats(hist, 11, 10));
}

TEST_CASE("correct") {
  const WindowStats below{.mean_observed = 2.0, .mean_predicted = 2.3, .mean_abs_err = 0.1, .samples = 3};
  const WindowStats above{.mean_observed = 2.6, .mean_predicted = 2.3, .mean_abs_err = 0.1, .samples = 3};
  CHECK(correct(2.5, below, 0.01) == doctest::Approx(2.4));
  CHECK(correct(2.5, above, 0.01) == doctest::Approx(2.6));
  CHECK(correct(2.5, below, 0.1) == 2.5);
  const WindowStats level{.mean_observed = 2.3, .mean_predicted = 2.305, .mean_abs_err = 0.2, .samples = 2};
  CHECK(correct(2.5, level, 0.01) == 2.5);

  CorrectionRule rel;
  CHECK(rel.threshold(below) == doctest::Approx(0.02));
  CorrectionRule abs{.relative = 0.01, .absolute = 0.5};
  CHECK(abs.threshold(below) == 0.5);
}

TEST_CASE("property: correct never returns a nonpositive interval") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 5000; ++i) {
    const WindowStats s{.mean_observed = u(rng), .mean_predicted = u(rng), .mean_abs_err = u(rng), .samples = 1};
    CHECK(correct(0.01 * u(rng), s, 0.0) > 0.0);
    CHECK(correct(0.01 * u(rng), s, 0.0, 0.25) >= 0.25);
  }
}

TEST_CASE("advance_window") {
  CHECK(advance_window(100, 3, 101, 104) == 103);
  CHECK(advance_window(100, 10, std::nullopt, 105) == 105);
  CHECK(advance_window(100, 10, 103, 105) == 110);
  CHECK(advance_window(100, 1, std::nullopt, 105) == 101);
}

TEST_CASE("RecoveryTracker learns a proportional relation and corrects a bias") {
  RecoveryTracker tr(CorrectionRule{.relative = 0.01, .absolute = std::nullopt});
  CHECK_FALSE(tr.raw_prediction(1.0));
  // h = 2 * lambda exactly
  for (std::int64_t t = 0; t < 10; ++t) {
    const double lam = 0.5 + 0.1 * static_cast<double>(t);
    const auto raw = tr.raw_prediction(lam);
    tr.record(t, 2.0 * lam, lam, raw);
    tr.end_iteration(t, 1, 4.0);
  }
  CHECK(*tr.raw_prediction(1.0) == doctest::Approx(2.0));
  CHECK(*tr.prediction(1.0) == doctest::Approx(2.0));

  // observations now run 1.0 above the fit; once a window closes the
  // prediction is shifted up by the window's mean error
  for (std::int64_t t = 10; t < 13; ++t) {
    const double lam = 1.0;
    const auto raw = tr.raw_prediction(lam);
    tr.record(t, 2.0 * lam + 1.0, lam, raw);
    tr.end_iteration(t, 1, 4.0);
  }
  REQUIRE(tr.last_stats());
  const double raw = *tr.raw_prediction(1.0);
  CHECK(*tr.prediction(1.0) == doctest::Approx(raw + tr.last_stats()->mean_abs_err));
  CHECK(tr.aggregates().count() == 13);
}

TEST_CASE("RecoveryTracker timeout pulls the window end back") {
  RecoveryTracker tr;
  tr.record(0, 2.0, 1.0, std::nullopt);
  tr.end_iteration(0, 10, 3.0);
  CHECK(tr.window().t_i == 1);
  CHECK(tr.window().t_j == 11);
  tr.record_missing(2, 3, std::nullopt, 1.0);
  CHECK(tr.window().t_j == 4);
  CHECK(tr.aggregates().count() == 1);
  tr.record_missing(3, 3, 2.5, 1.0);
  CHECK(tr.aggregates().count() == 2);
}
