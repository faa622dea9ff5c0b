#include "numsim/ls_estimator.hpp"

#include <algorithm>
#include <cmath>

#include "numsim/error.hpp"

namespace numsim {

void LsAggregates::observe(double input, double price) {
  if (!(input > 0.0)) throw Error("observe: input must be > 0");
  if (!(price >= 0.0)) throw Error("observe: price must be >= 0");
  s_xy_ += input * price;
  s_xx_ += input * input;
  ++count_;
}

double LsAggregates::estimate() const {
  if (!has_estimate()) throw InsufficientHistory("least-squares estimator has no samples yet");
  return s_xy_ / s_xx_;
}

LsAggregates observe(LsAggregates agg, double input, double price) {
  agg.observe(input, price);
  return agg;
}

double estimator(const LsAggregates& agg) { return agg.estimate(); }

double predict_interval(const LsAggregates& agg, double lambda_next) {
  const double w = agg.estimate();
  if (!(w > 0.0)) throw InsufficientHistory("estimator w is not positive");
  return lambda_next / w;
}

double predict_demand(const LsAggregates& agg, double lambda_next) {
  return predict_interval(agg, lambda_next);
}

WindowStats window_stats(std::span<const WindowSample> history, std::int64_t t_i, std::int64_t t_j) {
  if (t_i > t_j) throw Error("window_stats: window start after end");
  WindowStats stats;
  for (const auto& s : history) {
    if (s.iteration < t_i || s.iteration > t_j) continue;
    stats.mean_observed += s.observed;
    stats.mean_predicted += s.predicted;
    stats.mean_abs_err += std::abs(s.observed - s.predicted);
    ++stats.samples;
  }
  if (stats.samples == 0) throw Error("window_stats: no samples in window");
  const auto n = static_cast<double>(stats.samples);
  stats.mean_observed /= n;
  stats.mean_predicted /= n;
  stats.mean_abs_err /= n;
  return stats;
}

double CorrectionRule::threshold(const WindowStats& stats) const {
  return absolute ? *absolute : relative * stats.mean_observed;
}

double correct(double predicted, const WindowStats& stats, double eps_correct, double floor) {
  double out = predicted;
  const bool gap = stats.mean_abs_err > eps_correct;
  const bool means_apart = std::abs(stats.mean_observed - stats.mean_predicted) > eps_correct;
  if (gap && means_apart) {
    out = stats.mean_observed < stats.mean_predicted ? predicted - stats.mean_abs_err
                                                     : predicted + stats.mean_abs_err;
  }
  return std::max(out, floor);
}

std::int64_t advance_window(std::int64_t t_i, std::int64_t gamma,
                            std::optional<std::int64_t> response_arrived_at, std::int64_t t_timeout) {
  const bool arrived = response_arrived_at && *response_arrived_at <= t_timeout;
  if (t_i + gamma > t_timeout && !arrived) return t_timeout;
  return t_i + gamma;
}

RecoveryTracker::RecoveryTracker(CorrectionRule rule, double floor) : rule_(rule), floor_(floor) {}

std::optional<double> RecoveryTracker::raw_prediction(double price) const {
  if (!agg_.has_estimate() || !(agg_.estimate() > 0.0)) return std::nullopt;
  return predict_interval(agg_, price);
}

std::optional<double> RecoveryTracker::prediction(double price) const {
  auto raw = raw_prediction(price);
  if (!raw || !stats_) return raw;
  return correct(*raw, *stats_, rule_.threshold(*stats_), floor_);
}

void RecoveryTracker::record(std::int64_t t, double observed, double price, std::optional<double> raw) {
  agg_.observe(observed, price);
  if (raw) open_.push_back(WindowSample{t, observed, *raw});
}

void RecoveryTracker::record_missing(std::int64_t t, std::int64_t timeout_span, std::optional<double> fed,
                                     double price) {
  const std::int64_t t_timeout = window_.t_i + timeout_span;
  const std::int64_t cut = advance_window(window_.t_i, window_.gamma, std::nullopt, t_timeout);
  window_.t_j = std::max(t, std::min(window_.t_j, cut));
  if (fed) agg_.observe(*fed, price);
}

void RecoveryTracker::end_iteration(std::int64_t t, std::int64_t gamma, double rtt_timeout) {
  if (t < window_.t_j) return;
  if (!open_.empty()) {
    stats_ = window_stats(open_, window_.t_i, window_.t_j);
    window_.mean_h = stats_->mean_observed;
    window_.mean_hhat = stats_->mean_predicted;
    window_.mean_abs_err = stats_->mean_abs_err;
    window_.eps_correct = rule_.threshold(*stats_);
  }
  open_.clear();
  window_.gamma = std::max<std::int64_t>(1, gamma);
  window_.t_i = t + 1;
  window_.t_j = window_.t_i + window_.gamma;
  window_.rtt_timeout = rtt_timeout;
}

}  // namespace numsim
