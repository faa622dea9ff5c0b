#include "numsim/delay_model.hpp"

#include <algorithm>

#include "numsim/error.hpp"

namespace numsim {

double link_term(double flow, double min_rate) {
  if (!(min_rate > 0.0)) throw Error("link_term: min_rate must be > 0");
  if (!(flow > min_rate)) throw SaturatedBranch("link_term: flow at or below min_rate");
  const double rho = min_rate / flow;
  return rho / (flow - min_rate) + 1.0 / min_rate;
}

double saturated_delay(double buffer, double rate) {
  if (!(rate > 0.0)) throw Error("saturated_delay: rate must be > 0");
  if (!(buffer >= 0.0)) throw Error("saturated_delay: negative buffer");
  return buffer / rate;
}

double path_delay(const Network& network, std::span<const double> flows,
                  std::span<const double> rates, std::size_t user) {
  const auto& links = network.links();
  double delay = 0.0;
  for (std::size_t l : network.route(user)) {
    if (flows[l] > links[l].min_rate) {
      delay += link_term(flows[l], links[l].min_rate);
    } else {
      delay += saturated_delay(network.users()[user].buffer, rates[user]);
    }
    delay += links[l].propagation_delay;
  }
  return delay;
}

double link_max_delay(const Network& network, std::span<const double> flows,
                      std::span<const double> rates, std::size_t link) {
  const auto users = network.users_on(link);
  if (users.empty()) throw Error("link_max_delay: link " + network.links()[link].id + " has no users");
  double worst = 0.0;
  for (std::size_t s : users) worst = std::max(worst, path_delay(network, flows, rates, s));
  return worst;
}

double link_rtt(double d_max, double serv_delay) {
  return 2.0 * d_max + serv_delay;
}

double link_rtt_for(const Network& network, std::span<const double> flows,
                    std::span<const double> rates, std::size_t link) {
  return link_rtt(link_max_delay(network, flows, rates, link), network.links()[link].serv_delay);
}

RttRecord rtt_max_update(RttRecord record, double rtt_now) {
  if (!(rtt_now > 0.0)) throw Error("rtt_max_update: RTT must be > 0");
  record.rtt_l = rtt_now;
  record.rtt_max_seen = std::max(record.rtt_max_seen, rtt_now);
  return record;
}

}  // namespace numsim
