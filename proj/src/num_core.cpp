#include "numsim/num_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numsim/error.hpp"

namespace numsim {

double utility(double x) {
  if (!(x >= 0.0)) throw Error("utility: negative bandwidth");
  return 1.0 / (1.0 + std::exp(-x));
}

double utility_slope(double x) {
  const double e = std::exp(-x);
  return e / ((1.0 + e) * (1.0 + e));
}

double user_demand(double price, double x_max) {
  if (!(price >= 0.0)) throw Error("user_demand: negative price");
  if (!(x_max > 0.0)) throw Error("user_demand: x_max must be > 0");
  if (price == 0.0) return x_max;
  if (price >= 0.25) return 0.0;
  const double u = 2.0 * price / ((1.0 - 2.0 * price) + std::sqrt(1.0 - 4.0 * price));
  return std::clamp(-std::log(u), 0.0, x_max);
}

double step_size(std::int64_t t, double sigma0) {
  return sigma0 / (static_cast<double>(t) + 1.0);
}

double price_update(double lambda, double sigma, double capacity, double flow, double lambda_min) {
  return std::max(lambda_min, lambda - sigma * (capacity - flow));
}

double objective(const Network& network, std::span<const double> rates) {
  if (rates.size() != network.user_count()) throw Error("objective: one rate per user required");
  double sum = 0.0;
  for (double x : rates) sum += utility(x);
  return sum;
}

void advance_prices(PriceState& state, const Network& network, std::span<const double> flows) {
  const double sigma = step_size(state.iteration, state.sigma0);
  for (std::size_t l = 0; l < network.link_count(); ++l) {
    state.lambda[l] = price_update(state.lambda[l], sigma, network.links()[l].capacity, flows[l],
                                   state.lambda_min);
  }
  ++state.iteration;
}

}  // namespace numsim
