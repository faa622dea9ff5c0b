#include "numsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numsim/error.hpp"

namespace numsim {

void ScenarioConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(sigma0 > 0.0)) throw ConfigError("sigma0 must be > 0");
  if (!(lambda_min >= 0.0)) throw ConfigError("lambda_min must be >= 0");
  if (!(epsilon_rtt >= 0.0)) throw ConfigError("epsilon_rtt must be >= 0");
  if (!(noise_eps >= 0.0)) throw ConfigError("noise_eps must be >= 0");
  if (gamma && *gamma < 1) throw ConfigError("gamma must be >= 1");
  if (iteration_period && !(*iteration_period > 0.0)) throw ConfigError("iteration_period must be > 0");
  if (eps_correct.absolute && !(*eps_correct.absolute > 0.0))
    throw ConfigError("absolute correction threshold must be > 0");
  if (!eps_correct.absolute && !(eps_correct.relative > 0.0))
    throw ConfigError("relative correction threshold must be > 0");
  loss.validate();
}

Simulation::Simulation(ScenarioConfig config, FrameSink sink)
    : config_(std::move(config)), sink_(std::move(sink)), rng_(config_.seed) {
  config_.validate();
  const Network& net = config_.network;
  const std::size_t n_links = net.link_count();
  const std::size_t n_users = net.user_count();

  prices_.lambda.assign(n_links, config_.lambda_min);
  prices_.lambda_min = config_.lambda_min;
  prices_.sigma0 = config_.sigma0;
  last_broadcast_ = prices_.lambda;

  rates_.resize(n_users);
  for (std::size_t s = 0; s < n_users; ++s) rates_[s] = net.users()[s].x_max;
  known_rates_ = rates_;

  link_trackers_.assign(n_links, RecoveryTracker(config_.eps_correct));
  demand_trackers_.clear();
  for (std::size_t s = 0; s < n_users; ++s)
    demand_trackers_.emplace_back(config_.eps_correct, net.users()[s].x_min_req);

  const auto flows = aggregate_flow(net, rates_);
  rtt_.resize(n_links);
  last_h_.assign(n_links, std::nullopt);
  initial_rtt_.resize(n_links);
  for (std::size_t l = 0; l < n_links; ++l) {
    rtt_[l].link = l;
    rtt_[l].epsilon = config_.epsilon_rtt;
    initial_rtt_[l] = link_rtt_for(net, flows, rates_, l) + config_.epsilon_rtt;
  }

  for (const auto& link : net.links()) trace_.link_ids.push_back(link.id);
  for (std::size_t s = 0; s < n_users; ++s) {
    trace_.user_ids.push_back(net.users()[s].id);
    trace_.user_bottleneck.push_back(net.bottleneck_of(s));
  }
  trace_.tracked_link = net.most_shared_link();
  trace_.records.reserve(static_cast<std::size_t>(config_.iterations));
}

std::int64_t Simulation::timeout_span(std::size_t link) const {
  const double rtt = last_h_[link].value_or(initial_rtt_[link]);
  const double period = config_.iteration_period.value_or(std::max(rtt_[link].rtt_max(), rtt));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(rtt / period)));
}

Frame Simulation::send(MessageCode code, std::uint16_t id, double payload, bool dropped) {
  PriceMessage msg;
  msg.code = static_cast<std::uint8_t>(code);
  msg.identifier = id;
  msg.sequence = static_cast<std::uint16_t>(prices_.iteration & 0xffff);
  msg.timestamp_ms = static_cast<std::uint32_t>(static_cast<std::uint64_t>(clock_s_ * 1000.0) & 0xffffffffu);
  msg.payload = payload;
  const Frame frame = encode(msg);
  if (sink_) sink_(frame, dropped);
  return frame;
}

const IterationRecord& Simulation::step() {
  const Network& net = config_.network;
  const std::size_t n_links = net.link_count();
  const std::size_t n_users = net.user_count();
  const std::int64_t t = prices_.iteration;

  IterationRecord rec;
  rec.iteration = t;
  rec.lambda = prices_.lambda;
  rec.loss = inject_loss(config_.loss, t, rng_);
  const bool notifications_lost = rec.loss == Drop::kNotification;
  const bool responses_lost = rec.loss == Drop::kResponse;

  // (1) Congested, priced or repriced links broadcast their price.
  const auto flows_before = aggregate_flow(net, rates_);
  rec.notified.assign(n_links, false);
  std::vector<double> heard_price(n_links, config_.lambda_min);
  for (std::size_t l = 0; l < n_links; ++l) {
    const double lambda = prices_.lambda[l];
    const bool congested = flows_before[l] > net.links()[l].capacity;
    const bool repriced = lambda != last_broadcast_[l];
    if (!congested && !repriced && !(lambda > config_.lambda_min)) continue;
    rec.notified[l] = true;
    // A dropped exchange leaves the link unacknowledged, so it repeats.
    if (rec.loss == Drop::kNone) last_broadcast_[l] = lambda;
    const Frame frame = send(MessageCode::kPriceNotification, static_cast<std::uint16_t>(l),
                             prices_.lambda[l], notifications_lost);
    if (!notifications_lost) heard_price[l] = decode(frame).payload;
  }

  // (2) Users reached by a notification answer with their new demand.
  std::vector<bool> expected(n_users, false);
  std::vector<bool> received(n_users, false);
  std::vector<double> user_price(n_users, 0.0);
  for (std::size_t s = 0; s < n_users; ++s) {
    const auto route = net.route(s);
    expected[s] = std::any_of(route.begin(), route.end(), [&](std::size_t l) { return rec.notified[l]; });
    user_price[s] = path_price(net, prices_.lambda, s);
    if (!expected[s] || notifications_lost) continue;
    const User& user = net.users()[s];
    const double demand = user_demand(path_price(net, heard_price, s), user.x_max);
    rates_[s] = std::clamp(demand, user.x_min_req, user.x_max);
    const Frame frame = send(MessageCode::kResponse, static_cast<std::uint16_t>(s), rates_[s], responses_lost);
    if (!responses_lost) {
      known_rates_[s] = decode(frame).payload;
      received[s] = true;
    }
  }

  // (3) Interval the exchange took, measured or predicted per link.
  const auto flows_now = aggregate_flow(net, rates_);
  rec.h_actual.resize(n_links);
  rec.h_estimated.assign(n_links, std::nullopt);
  rec.delta_h.assign(n_links, std::nullopt);
  rec.w.assign(n_links, std::nullopt);
  double elapsed = 0.0;
  for (std::size_t l = 0; l < n_links; ++l) {
    double h = link_rtt_for(net, flows_now, rates_, l) + config_.epsilon_rtt;
    if (config_.noise_eps > 0.0) h += config_.noise_eps * (2.0 * rng_.uniform() - 1.0);
    h = std::max(h, std::numeric_limits<double>::min());
    rec.h_actual[l] = h;

    RecoveryTracker& tracker = link_trackers_[l];
    const double lambda = prices_.lambda[l];
    const auto raw = config_.estimator_enabled ? tracker.raw_prediction(lambda) : std::nullopt;
    const auto predicted = config_.estimator_enabled ? tracker.prediction(lambda) : std::nullopt;
    rec.h_estimated[l] = predicted;

    // The longest-RTT user of a link answers in the same class as every
    // other user, so the link's measurement survives iff responses do.
    const bool measured = rec.notified[l] && !notifications_lost && !responses_lost;
    if (measured) {
      tracker.record(t, h, lambda, raw);
      rtt_[l] = rtt_max_update(rtt_[l], h);
      last_h_[l] = h;
      elapsed = std::max(elapsed, h);
    } else if (rec.estimate_used()) {
      const double used = predicted.value_or(last_h_[l].value_or(initial_rtt_[l]));
      rec.h_estimated[l] = used;
      if (rec.notified[l]) {
        const auto fed = config_.feed_estimates ? std::optional<double>(used) : std::nullopt;
        tracker.record_missing(t, timeout_span(l), fed, lambda);
      }
      elapsed = std::max(elapsed, used);
    }
    if (rec.h_estimated[l]) rec.delta_h[l] = std::abs(h - *rec.h_estimated[l]);

    const std::int64_t span = timeout_span(l);
    tracker.end_iteration(t, config_.gamma.value_or(span), rtt_[l].rtt_max());
    if (tracker.aggregates().has_estimate()) rec.w[l] = tracker.aggregates().estimate();
  }

  // (4) Recover missing demands, then reprice every link.
  rec.x_estimated.assign(n_users, std::nullopt);
  rec.w_x.assign(n_users, std::nullopt);
  for (std::size_t s = 0; s < n_users; ++s) {
    RecoveryTracker& tracker = demand_trackers_[s];
    const User& user = net.users()[s];
    const auto raw = config_.estimator_enabled ? tracker.raw_prediction(user_price[s]) : std::nullopt;
    if (received[s]) {
      tracker.record(t, known_rates_[s], user_price[s], raw);
    } else if (expected[s]) {
      const auto predicted = config_.estimator_enabled ? tracker.prediction(user_price[s]) : std::nullopt;
      if (predicted) known_rates_[s] = std::clamp(*predicted, user.x_min_req, user.x_max);
      rec.x_estimated[s] = known_rates_[s];
      const auto fed = config_.feed_estimates && predicted ? std::optional<double>(known_rates_[s]) : std::nullopt;
      tracker.record_missing(t, timeout_span(trace_.user_bottleneck[s]), fed, user_price[s]);
    }
    const std::size_t home = trace_.user_bottleneck[s];
    tracker.end_iteration(t, config_.gamma.value_or(timeout_span(home)), rtt_[home].rtt_max());
    if (tracker.aggregates().has_estimate()) rec.w_x[s] = tracker.aggregates().estimate();
  }
  advance_prices(prices_, net, aggregate_flow(net, known_rates_));
  trace_.final_lambda = prices_.lambda;

  // (5) Bookkeeping.
  rec.rates = rates_;
  rec.objective = objective(net, rates_);
  clock_s_ += elapsed > 0.0 ? elapsed : config_.iteration_period.value_or(0.0);
  trace_.records.push_back(std::move(rec));
  return trace_.records.back();
}

void Simulation::run() {
  while (prices_.iteration < config_.iterations) step();
}

Trace run_scenario(const ScenarioConfig& config, FrameSink sink) {
  Simulation sim(config, std::move(sink));
  sim.run();
  return sim.trace();
}

Summary summarize(const Trace& trace, double convergence_tol) {
  if (trace.records.empty()) throw Error("summarize: empty trace");
  Summary out;
  const std::size_t l = trace.tracked_link;
  out.tracked_link = l;
  out.tracked_link_id = trace.link_ids[l];

  const auto& last = trace.records.back();
  out.final_rates = last.rates;
  out.final_objective = last.objective;

  for (const auto& rec : trace.records) {
    if (rec.w[l]) {
      if (!out.w_first) out.w_first = rec.w[l];
      out.w_last = rec.w[l];
    }
    if (!rec.estimate_used()) continue;
    out.loss_iterations.push_back(rec.iteration);
    if (rec.delta_h[l]) out.loss_errors.push_back(*rec.delta_h[l]);
  }
  if (!out.loss_errors.empty()) {
    double sum = 0.0;
    double worst = 0.0;
    for (double e : out.loss_errors) {
      sum += e;
      worst = std::max(worst, e);
    }
    out.max_error = worst;
    out.mean_error = sum / static_cast<double>(out.loss_errors.size());
  }

  out.final_lambda = trace.final_lambda.empty() ? last.lambda : trace.final_lambda;
  const auto& recs = trace.records;
  std::optional<std::int64_t> since;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    double moved = 0.0;
    for (std::size_t k = 0; k < recs[i].lambda.size(); ++k) moved += std::abs(recs[i].lambda[k] - recs[i - 1].lambda[k]);
    if (moved < convergence_tol) {
      if (!since) since = recs[i].iteration;
    } else {
      since.reset();
    }
  }
  out.convergence_iteration = since;
  return out;
}

}  // namespace numsim
