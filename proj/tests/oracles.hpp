#pragma once

// Test-side reference implementations. They deliberately avoid the library's
// code paths: brute force, full-history sums, byte-at-a-time arithmetic.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Maximizer of U(x) - price*x on a uniform grid over [0, x_max].
inline double grid_demand(double price, double x_max, double step = 1e-4) {
  const auto n = static_cast<long>(std::llround(x_max / step));
  double best_x = 0.0;
  double best_v = logistic(0.0);
  for (long i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) * step;
    const double v = logistic(x) - price * x;
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

// Central difference of the logistic.
inline double slope(double x, double h = 1e-6) { return (logistic(x + h) - logistic(x - h)) / (2.0 * h); }

// Closed-form proportional LS over a stored history, summed in long double.
inline double batch_ls(const std::vector<std::pair<double, double>>& samples) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (auto [input, price] : samples) {
    num += static_cast<long double>(input) * price;
    den += static_cast<long double>(input) * input;
  }
  return static_cast<double>(num / den);
}

// RFC 1071 sum, folded once per byte pair with a 64-bit accumulator.
inline std::uint16_t internet_checksum(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    std::uint64_t word = static_cast<std::uint64_t>(bytes[i]) << 8;
    if (i + 1 < bytes.size()) word |= bytes[i + 1];
    sum += word;
  }
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum & 0xffff);
}

// M/M/1 link term written out from its pieces.
inline double mm1(double flow, double min_rate) {
  const double rho = min_rate / flow;
  return rho / (flow - min_rate) + 1.0 / min_rate;
}

}  // namespace oracle
