#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace numsim {

// Proportional least-squares fit price = input * w, kept as two running sums
// so the memory cost is constant in the number of samples. `input` is the
// observed update interval h for the RTT estimator and the observed rate x
// for the demand estimator.
class LsAggregates {
 public:
  // Throws on a nonpositive input or a negative price.
  void observe(double input, double price);

  double s_xy() const { return s_xy_; }
  double s_xx() const { return s_xx_; }
  std::int64_t count() const { return count_; }

  bool has_estimate() const { return count_ >= 1 && s_xx_ > 0.0; }
  // s_xy / s_xx. Throws InsufficientHistory before the first sample.
  double estimate() const;

 private:
  double s_xy_ = 0.0;
  double s_xx_ = 0.0;
  std::int64_t count_ = 0;
};

LsAggregates observe(LsAggregates agg, double input, double price);
double estimator(const LsAggregates& agg);

// lambda_next / w. Throws InsufficientHistory when w is undefined or <= 0.
double predict_interval(const LsAggregates& agg, double lambda_next);
double predict_demand(const LsAggregates& agg, double lambda_next);

struct WindowSample {
  std::int64_t iteration = 0;
  double observed = 0.0;
  double predicted = 0.0;
};

struct WindowStats {
  double mean_observed = 0.0;
  double mean_predicted = 0.0;
  double mean_abs_err = 0.0;
  std::int64_t samples = 0;
};

// Means over the samples whose iteration lies in [t_i, t_j]. The divisor is
// the number of samples present, not t_j - t_i, so iterations with a missing
// observation do not dilute the means. Throws on an empty window.
WindowStats window_stats(std::span<const WindowSample> history, std::int64_t t_i, std::int64_t t_j);

// Correction threshold: `absolute` when set, otherwise relative * mean_observed.
struct CorrectionRule {
  double relative = 0.01;
  std::optional<double> absolute;

  double threshold(const WindowStats& stats) const;
};

// Shifts a prediction by the window's mean absolute error toward the side
// the observations fell on. Leaves it alone when the error is within
// `eps_correct` or the two window means agree within it. Never returns less
// than `floor`.
double correct(double predicted, const WindowStats& stats, double eps_correct, double floor = 1e-6);

// End of the window opened at t_i: t_i + gamma, cut back to t_timeout when
// that comes first and no response arrived by then.
std::int64_t advance_window(std::int64_t t_i, std::int64_t gamma,
                            std::optional<std::int64_t> response_arrived_at, std::int64_t t_timeout);

// Snapshot of the correction window; the means are those of the most
// recently closed window.
struct CorrectionWindow {
  std::int64_t t_i = 0;
  std::int64_t t_j = 0;
  std::int64_t gamma = 1;
  double mean_h = 0.0;
  double mean_hhat = 0.0;
  double mean_abs_err = 0.0;
  double eps_correct = 0.0;
  double rtt_timeout = 0.0;
};

// Streaming recovery for one tracked quantity: the LS fit plus the windowed
// error correction around it. Only the samples of the open window are kept,
// so storage is bounded by the window length.
class RecoveryTracker {
 public:
  explicit RecoveryTracker(CorrectionRule rule = {}, double floor = 1e-6);

  // Plain LS prediction price / w, or nullopt without history.
  std::optional<double> raw_prediction(double price) const;
  // raw_prediction adjusted with the last closed window's statistics.
  std::optional<double> prediction(double price) const;

  // An observation arrived at iteration t. `raw` is what raw_prediction
  // returned for this iteration before the observation was known.
  void record(std::int64_t t, double observed, double price, std::optional<double> raw);
  // The observation for iteration t never arrived. Pulls the window end
  // back to the timeout when the timeout falls inside the window. With
  // `fed` set the estimate is folded into the fit as if observed.
  void record_missing(std::int64_t t, std::int64_t timeout_span, std::optional<double> fed, double price);

  // Closes the window when t reached its end and opens the next one of
  // length gamma starting at t + 1.
  void end_iteration(std::int64_t t, std::int64_t gamma, double rtt_timeout);

  const LsAggregates& aggregates() const { return agg_; }
  const std::optional<WindowStats>& last_stats() const { return stats_; }
  const CorrectionWindow& window() const { return window_; }

 private:
  CorrectionRule rule_;
  double floor_;
  LsAggregates agg_;
  std::vector<WindowSample> open_;
  std::optional<WindowStats> stats_;
  CorrectionWindow window_;
};

}  // namespace numsim
