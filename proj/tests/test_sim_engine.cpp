#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "numsim/delay_model.hpp"
#include "numsim/num_core.hpp"
#include "numsim/sim_engine.hpp"
#include "numsim/trace_io.hpp"
#include "numsim/wire_codec.hpp"
#include "oracles.hpp"

using namespace numsim;

namespace {

ScenarioConfig parking(LossPolicy loss = {}) {
  ScenarioConfig cfg;
  cfg.network = parking_lot_network();
  cfg.network_source = "parking-lot";
  cfg.loss = loss;
  return cfg;
}

std::string csv(const Trace& t) {
  std::ostringstream out;
  write_trace(t, out);
  return out.str();
}

}  // namespace

TEST_CASE("first iteration notifies the congested link and raises its price") {
  Simulation sim(ScenarioConfig{});
  const auto& rec = sim.step();
  CHECK(rec.notified[0]);
  CHECK(rec.lambda[0] == 0.0);
  CHECK(sim.prices().lambda[0] > 0.0);
  CHECK(sim.iteration() == 1);
}

TEST_CASE("single link converges to an equal split at the KKT price") {
  const auto trace = run_scenario(ScenarioConfig{});
  const auto sum = summarize(trace);
  double total = 0.0;
  for (double x : sum.final_rates) {
    CHECK(x == doctest::Approx(10.0 / 3.0).epsilon(0.01));
    CHECK(std::abs(oracle::slope(x) - sum.final_lambda[0]) <= 1e-3);
    total += x;
  }
  CHECK(std::abs(total - 10.0) <= 0.1);
  CHECK_FALSE(sum.max_error);
  for (const auto& r : trace.records) CHECK_FALSE(r.estimate_used());
}

TEST_CASE("parking lot prices only the shared link") {
  const auto trace = run_scenario(parking());
  const auto net = parking_lot_network();
  const auto sum = summarize(trace);
  CHECK(sum.final_lambda[net.link_index("CD")] > 0.01);
  CHECK(sum.final_lambda[net.link_index("AB")] == 0.0);
  CHECK(sum.final_lambda[net.link_index("BC")] == 0.0);
  for (double x : sum.final_rates) CHECK(x == doctest::Approx(10.0 / 3.0).epsilon(0.01));
  CHECK(sum.tracked_link_id == "CD");
}

TEST_CASE("no loss runs match a run with the estimator switched off") {
  for (auto cfg : {ScenarioConfig{}, parking()}) {
    const auto with = run_scenario(cfg);
    cfg.estimator_enabled = false;
    const auto without = run_scenario(cfg);
    REQUIRE(with.records.size() == without.records.size());
    for (std::size_t t = 0; t < with.records.size(); ++t) {
      CHECK(with.records[t].lambda == without.records[t].lambda);
      CHECK(with.records[t].rates == without.records[t].rates);
      CHECK(with.records[t].h_actual == without.records[t].h_actual);
    }
  }
}

TEST_CASE("periodic loss flags exactly the multiples of k") {
  const auto trace = run_scenario(parking(LossPolicy{PeriodicLoss{50}}));
  for (const auto& r : trace.records) {
    CHECK(r.estimate_used() == (r.iteration % 50 == 0));
    // a prediction is always on record once there is history, and always at a drop
    if (r.estimate_used()) CHECK(r.h_estimated[trace.tracked_link].has_value());
  }
  const auto sum = summarize(trace);
  CHECK(sum.loss_iterations.size() == 10);
  CHECK(sum.loss_errors.size() == 500 / 50);
}

TEST_CASE("more frequent loss makes the worst miss no smaller") {
  const auto s5 = summarize(run_scenario(parking(LossPolicy{PeriodicLoss{5}})));
  const auto s50 = summarize(run_scenario(parking(LossPolicy{PeriodicLoss{50}})));
  CHECK(*s5.max_error >= *s50.max_error);
  CHECK(*s5.mean_error > *s50.mean_error);
}

TEST_CASE("same seed gives the same trace, different seed changes random drops") {
  auto cfg = parking(LossPolicy{BernoulliLoss{0.2}});
  const auto a = csv(run_scenario(cfg));
  const auto b = csv(run_scenario(cfg));
  CHECK(a == b);
  cfg.seed = 43;
  CHECK(csv(run_scenario(cfg)) != a);
}

TEST_CASE("every frame on the wire decodes, dropped or not") {
  int sent = 0, dropped = 0;
  auto cfg = parking(LossPolicy{PeriodicLoss{7}});
  cfg.iterations = 60;
  run_scenario(cfg, [&](const Frame& f, bool lost) {
    const auto m = decode(f);
    CHECK(m.msg_type == 1);
    CHECK(m.code <= 1);
    ++sent;
    dropped += lost;
  });
  CHECK(sent > 0);
  CHECK(dropped > 0);
}

TEST_CASE("a saturated scenario keeps delays finite and positive") {
  auto net = build_network({Link{.id = "L", .capacity = 2.0, .min_rate = 2.0}},
                           {User{.id = "a", .route = {"L"}, .x_min_req = 0.5},
                            User{.id = "b", .route = {"L"}, .x_min_req = 0.5}});
  ScenarioConfig cfg;
  cfg.network = net;
  cfg.iterations = 200;
  cfg.loss = LossPolicy{PeriodicLoss{10}};
  const auto trace = run_scenario(cfg);
  bool saturated = false;
  for (const auto& r : trace.records) {
    const double flow = std::accumulate(r.rates.begin(), r.rates.end(), 0.0);
    saturated |= flow <= 2.0;
    CHECK(std::isfinite(r.h_actual[0]));
    CHECK(r.h_actual[0] > 0.0);
    if (r.h_estimated[0]) {
      CHECK(std::isfinite(*r.h_estimated[0]));
      CHECK(*r.h_estimated[0] > 0.0);
    }
  }
  CHECK(saturated);
}

TEST_CASE("config validation") {
  ScenarioConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS(cfg.validate());
  cfg = ScenarioConfig{};
  cfg.sigma0 = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg = ScenarioConfig{};
  cfg.loss = LossPolicy{PeriodicLoss{0}};
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("rtt noise is bounded and seeded") {
  auto cfg = ScenarioConfig{};
  cfg.iterations = 100;
  const auto clean = run_scenario(cfg);
  cfg.noise_eps = 0.05;
  const auto noisy = run_scenario(cfg);
  // without loss the intervals never feed back into prices
  bool moved = false;
  for (std::size_t t = 0; t < 100; ++t) {
    const double d = noisy.records[t].h_actual[0] - clean.records[t].h_actual[0];
    CHECK(std::abs(d) <= 0.05);
    moved |= d != 0.0;
  }
  CHECK(moved);
  CHECK(csv(noisy) == csv(run_scenario(cfg)));
}
