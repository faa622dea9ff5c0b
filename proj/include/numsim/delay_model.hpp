#pragma once

#include <cstddef>
#include <span>

#include "numsim/topology.hpp"

namespace numsim {

// Running RTT bookkeeping for one link.
struct RttRecord {
  std::size_t link = 0;
  double rtt_l = 0.0;          // most recent RTT_l
  double rtt_max_seen = 0.0;   // running max of RTT_l
  double epsilon = 0.0;        // slack added on top of the running max

  // Running max plus slack: the notification interval bound.
  double rtt_max() const { return rtt_max_seen + epsilon; }
};

// M/M/1 per-link delay rho / (flow - min_rate) + 1 / min_rate with
// rho = min_rate / flow. Throws SaturatedBranch when flow <= min_rate.
double link_term(double flow, double min_rate);

// Buffer drain time B / x for a link the user saturates.
double saturated_delay(double buffer, double rate);

// Notification delay from the network to `user`: link terms along the route,
// with the buffer-drain term replacing any link whose flow is at or below its
// min_rate, plus propagation delays.
double path_delay(const Network& network, std::span<const double> flows,
                  std::span<const double> rates, std::size_t user);

// Longest path_delay among users of `link`.
double link_max_delay(const Network& network, std::span<const double> flows,
                      std::span<const double> rates, std::size_t link);

// 2 * d_max + serv_delay.
double link_rtt(double d_max, double serv_delay);

// RTT_l of `link` for the given allocation.
double link_rtt_for(const Network& network, std::span<const double> flows,
                    std::span<const double> rates, std::size_t link);

RttRecord rtt_max_update(RttRecord record, double rtt_now);

}  // namespace numsim
