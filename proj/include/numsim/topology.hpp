#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace numsim {

struct Link {
  std::string id;
  double capacity = 10.0;           // C_l
  double min_rate = 1.0;            // x_l^min, notification processing rate
  double serv_delay = 0.5;          // d_l^serv, seconds
  double propagation_delay = 0.0;   // d_l^propa, seconds
};

struct User {
  std::string id;
  std::vector<std::string> route;   // ordered link ids
  double x_max = 10.0;
  double x_min_req = 0.5;           // x_s^min
  double buffer = 10.0;             // B_s, packets
};

// Immutable after construction. Links and users are stored sorted by id and
// addressed by position in those sorted vectors everywhere else in the
// library; routes are kept as link positions in their original order.
class Network {
 public:
  const std::vector<Link>& links() const { return links_; }
  const std::vector<User>& users() const { return users_; }

  std::size_t link_count() const { return links_.size(); }
  std::size_t user_count() const { return users_.size(); }

  // Positions of the links user `user` traverses, in route order.
  std::span<const std::size_t> route(std::size_t user) const { return routes_[user]; }
  // S(l): positions of the users traversing link `link`, ascending.
  std::span<const std::size_t> users_on(std::size_t link) const { return incidence_[link]; }

  std::size_t link_index(std::string_view id) const;
  std::size_t user_index(std::string_view id) const;

  // Route link with the highest user-count-to-capacity ratio; first in id
  // order on ties. Used as the per-user column source in traces.
  std::size_t bottleneck_of(std::size_t user) const;
  // Same ratio over all links.
  std::size_t most_shared_link() const;

 private:
  friend Network build_network(std::vector<Link> links, std::vector<User> users);

  std::vector<Link> links_;
  std::vector<User> users_;
  std::vector<std::vector<std::size_t>> routes_;
  std::vector<std::vector<std::size_t>> incidence_;
};

// Validates field invariants, sorts by id and derives the incidence sets.
// Throws TopologyError on any violation.
Network build_network(std::vector<Link> links, std::vector<User> users);

// flow_l = sum of rates of users in S(l). `rates` is indexed like users().
std::vector<double> aggregate_flow(const Network& network, std::span<const double> rates);

// lambda_s = sum of link prices over the user's route.
double path_price(const Network& network, std::span<const double> link_prices, std::size_t user);

// One link of capacity 10 shared by three users (ids "0", "1", "2").
Network single_link_network();
// Links AB, BC, CD (capacity 10). User 0 uses [CD], user 1 [BC, CD] and
// user 2 [AB, BC, CD].
Network parking_lot_network();

// Parses the plain-text topology format:
//   link <id> capacity <f> min_rate <f> serv_delay <f> prop_delay <f>
//   user <id> route <id,id,...> x_max <f> x_min <f> buffer <f>
// '#' starts a comment line. Keys after the id may appear in any order; keys
// that are omitted take the defaults of Link / User.
Network parse_topology(std::string_view text);
Network load_topology(const std::filesystem::path& path);

// "single-link" or "parking-lot"; throws TopologyError otherwise.
Network builtin_network(std::string_view name);

}  // namespace numsim
