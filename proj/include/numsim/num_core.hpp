#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "numsim/topology.hpp"

namespace numsim {

// Per-link dual variables and the step-size schedule that drives them.
struct PriceState {
  std::vector<double> lambda;
  double lambda_min = 0.0;
  std::int64_t iteration = 0;
  double sigma0 = 1.0;
};

// Logistic utility 1 / (1 + e^-x). Throws on negative x.
double utility(double x);
// dU/dx = e^-x / (1 + e^-x)^2.
double utility_slope(double x);

// argmax over [0, x_max] of U(x) - price * x.
//
// For 0 < price < 1/4 the stationary point solves e^-x / (1 + e^-x)^2 = price,
// a quadratic in u = e^-x whose smaller root gives x > 0. The root is taken
// in the form 2p / ((1 - 2p) + sqrt(1 - 4p)) so it stays accurate as p -> 0.
// U' never exceeds 1/4, so any price >= 1/4 gives 0.
double user_demand(double price, double x_max);

// sigma0 / (t + 1).
double step_size(std::int64_t t, double sigma0);

// Projected subgradient step max(lambda_min, lambda - sigma * (C - flow)).
double price_update(double lambda, double sigma, double capacity, double flow, double lambda_min);

// Sum of utilities over all users.
double objective(const Network& network, std::span<const double> rates);

// Advances every link price one step using `flows` and bumps the iteration.
void advance_prices(PriceState& state, const Network& network, std::span<const double> flows);

}  // namespace numsim
