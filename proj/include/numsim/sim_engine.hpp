#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "numsim/delay_model.hpp"
#include "numsim/loss.hpp"
#include "numsim/ls_estimator.hpp"
#include "numsim/num_core.hpp"
#include "numsim/topology.hpp"
#include "numsim/wire_codec.hpp"

namespace numsim {

struct ScenarioConfig {
  Network network = single_link_network();
  std::string network_source = "single-link";
  std::int64_t iterations = 500;
  double sigma0 = 1.0;
  double lambda_min = 0.0;
  LossPolicy loss;
  std::uint64_t seed = 42;
  double epsilon_rtt = 0.0;        // slack added to every RTT_l
  double noise_eps = 0.0;          // h = RTT + U(-noise_eps, noise_eps)
  std::optional<std::int64_t> gamma;  // window length; default is the last RTT in iterations
  CorrectionRule eps_correct;
  bool feed_estimates = false;
  bool estimator_enabled = true;
  // Seconds per iteration for turning an RTT into an iteration count. Unset,
  // an iteration lasts one notification interval (the link's RTT_max), so
  // the last recorded RTT spans a single iteration.
  std::optional<double> iteration_period;
  double convergence_tol = 1e-4;   // on sum |delta lambda|, used by summarize

  void validate() const;
};

struct IterationRecord {
  std::int64_t iteration = 0;
  std::vector<double> lambda;                   // per link, price in force at this iteration
  std::vector<double> rates;                    // per user, actual rate after the exchange
  std::vector<bool> notified;                   // per link, notification issued
  std::vector<double> h_actual;                 // per link, interval the exchange took
  std::vector<std::optional<double>> h_estimated;  // per link, corrected LS prediction or fallback
  std::vector<std::optional<double>> delta_h;   // per link, |h_actual - h_estimated|
  std::vector<std::optional<double>> w;         // per link, interval estimator after this iteration
  std::vector<std::optional<double>> w_x;       // per user, demand estimator after this iteration
  std::vector<std::optional<double>> x_estimated;  // per user, recovered demand when a response was missing
  Drop loss = Drop::kNone;
  double objective = 0.0;

  // A drop forces the network to schedule on h_estimated.
  bool estimate_used() const { return loss != Drop::kNone; }
};

struct Trace {
  std::vector<std::string> link_ids;
  std::vector<std::string> user_ids;
  std::vector<std::size_t> user_bottleneck;  // link position per user
  std::size_t tracked_link = 0;              // most shared link
  std::vector<IterationRecord> records;
  std::vector<double> final_lambda;          // prices after the last update
};

// Called for every frame the engine puts on the wire, with whether it was
// dropped before delivery.
using FrameSink = std::function<void(const Frame& frame, bool dropped)>;

// One feedback loop over a fixed network. Owns all mutable run state.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config, FrameSink sink = {});

  // Runs one iteration and returns its record (also appended to trace()).
  const IterationRecord& step();
  void run();

  const Trace& trace() const { return trace_; }
  const ScenarioConfig& config() const { return config_; }
  std::int64_t iteration() const { return prices_.iteration; }
  const std::vector<double>& rates() const { return rates_; }
  const PriceState& prices() const { return prices_; }

 private:
  std::int64_t timeout_span(std::size_t link) const;
  Frame send(MessageCode code, std::uint16_t id, double payload, bool dropped);

  ScenarioConfig config_;
  FrameSink sink_;
  Rng rng_;
  PriceState prices_;
  std::vector<double> rates_;          // what users transmit
  std::vector<double> known_rates_;    // what the network believes they transmit
  std::vector<double> last_broadcast_; // price each link last notified
  std::vector<RecoveryTracker> link_trackers_;
  std::vector<RecoveryTracker> demand_trackers_;
  std::vector<RttRecord> rtt_;
  std::vector<std::optional<double>> last_h_;
  std::vector<double> initial_rtt_;
  double clock_s_ = 0.0;
  Trace trace_;
};

Trace run_scenario(const ScenarioConfig& config, FrameSink sink = {});

struct Summary {
  std::size_t tracked_link = 0;
  std::string tracked_link_id;
  std::vector<double> final_lambda;
  std::vector<double> final_rates;
  std::vector<std::int64_t> loss_iterations;
  std::vector<double> loss_errors;          // |h - h_estimated| on the tracked link
  std::optional<double> max_error;
  std::optional<double> mean_error;
  std::optional<double> w_first;
  std::optional<double> w_last;
  std::optional<std::int64_t> convergence_iteration;
  double final_objective = 0.0;
};

// Throws Error on an empty trace.
Summary summarize(const Trace& trace, double convergence_tol = 1e-4);

}  // namespace numsim
