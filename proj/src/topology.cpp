#include "numsim/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "numsim/error.hpp"

namespace numsim {

namespace {

void validate_link(const Link& link) {
  if (link.id.empty()) throw TopologyError("link with empty id");
  if (!(link.capacity > 0.0)) throw TopologyError("link " + link.id + ": capacity must be > 0");
  if (!(link.min_rate > 0.0) || link.min_rate > link.capacity)
    throw TopologyError("link " + link.id + ": min_rate must lie in (0, capacity]");
  if (!(link.serv_delay >= 0.0)) throw TopologyError("link " + link.id + ": serv_delay must be >= 0");
  if (!(link.propagation_delay >= 0.0))
    throw TopologyError("link " + link.id + ": prop_delay must be >= 0");
}

void validate_user(const User& user) {
  if (user.id.empty()) throw TopologyError("user with empty id");
  if (user.route.empty()) throw TopologyError("user " + user.id + ": empty route");
  if (!(user.x_min_req > 0.0) || user.x_min_req > user.x_max)
    throw TopologyError("user " + user.id + ": need 0 < x_min <= x_max");
  if (!(user.buffer > 0.0)) throw TopologyError("user " + user.id + ": buffer must be > 0");
  std::set<std::string> seen;
  for (const auto& hop : user.route) {
    if (!seen.insert(hop).second)
      throw TopologyError("user " + user.id + ": link " + hop + " repeated in route");
  }
}

double load_ratio(const Network& network, std::size_t link) {
  return static_cast<double>(network.users_on(link).size()) / network.links()[link].capacity;
}

}  // namespace

Network build_network(std::vector<Link> links, std::vector<User> users) {
  for (const auto& link : links) validate_link(link);
  for (const auto& user : users) validate_user(user);

  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(links.begin(), links.end(), by_id);
  std::sort(users.begin(), users.end(), by_id);

  auto same_id = [](const auto& a, const auto& b) { return a.id == b.id; };
  if (auto it = std::adjacent_find(links.begin(), links.end(), same_id); it != links.end())
    throw TopologyError("duplicate link id " + it->id);
  if (auto it = std::adjacent_find(users.begin(), users.end(), same_id); it != users.end())
    throw TopologyError("duplicate user id " + it->id);

  Network net;
  net.links_ = std::move(links);
  net.users_ = std::move(users);
  net.incidence_.resize(net.links_.size());
  net.routes_.reserve(net.users_.size());
  for (std::size_t s = 0; s < net.users_.size(); ++s) {
    std::vector<std::size_t> route;
    for (const auto& hop : net.users_[s].route) {
      auto it = std::lower_bound(net.links_.begin(), net.links_.end(), hop,
                                 [](const Link& l, const std::string& id) { return l.id < id; });
      if (it == net.links_.end() || it->id != hop)
        throw TopologyError("user " + net.users_[s].id + ": unknown link " + hop);
      const auto l = static_cast<std::size_t>(it - net.links_.begin());
      route.push_back(l);
      net.incidence_[l].push_back(s);
    }
    net.routes_.push_back(std::move(route));
  }
  return net;
}

std::size_t Network::link_index(std::string_view id) const {
  auto it = std::lower_bound(links_.begin(), links_.end(), id,
                             [](const Link& l, std::string_view v) { return l.id < v; });
  if (it == links_.end() || it->id != id) throw TopologyError("unknown link " + std::string(id));
  return static_cast<std::size_t>(it - links_.begin());
}

std::size_t Network::user_index(std::string_view id) const {
  auto it = std::lower_bound(users_.begin(), users_.end(), id,
                             [](const User& u, std::string_view v) { return u.id < v; });
  if (it == users_.end() || it->id != id) throw TopologyError("unknown user " + std::string(id));
  return static_cast<std::size_t>(it - users_.begin());
}

std::size_t Network::bottleneck_of(std::size_t user) const {
  const auto hops = route(user);
  std::size_t best = hops.front();
  for (std::size_t l : hops) {
    const double r = load_ratio(*this, l);
    const double b = load_ratio(*this, best);
    if (r > b || (r == b && l < best)) best = l;
  }
  return best;
}

std::size_t Network::most_shared_link() const {
  std::size_t best = 0;
  for (std::size_t l = 1; l < links_.size(); ++l) {
    if (load_ratio(*this, l) > load_ratio(*this, best)) best = l;
  }
  return best;
}

std::vector<double> aggregate_flow(const Network& network, std::span<const double> rates) {
  if (rates.size() != network.user_count())
    throw Error("aggregate_flow: expected " + std::to_string(network.user_count()) + " rates, got " +
                std::to_string(rates.size()));
  for (double x : rates) {
    if (!(x >= 0.0)) throw Error("aggregate_flow: rates must be >= 0");
  }
  std::vector<double> flow(network.link_count(), 0.0);
  for (std::size_t l = 0; l < flow.size(); ++l) {
    for (std::size_t s : network.users_on(l)) flow[l] += rates[s];
  }
  return flow;
}

double path_price(const Network& network, std::span<const double> link_prices, std::size_t user) {
  if (link_prices.size() != network.link_count())
    throw Error("path_price: expected one price per link");
  double sum = 0.0;
  for (std::size_t l : network.route(user)) sum += link_prices[l];
  return sum;
}

Network single_link_network() {
  std::vector<Link> links{Link{.id = "L0"}};
  std::vector<User> users;
  for (const char* id : {"0", "1", "2"}) users.push_back(User{.id = id, .route = {"L0"}});
  return build_network(std::move(links), std::move(users));
}

Network parking_lot_network() {
  std::vector<Link> links{Link{.id = "AB"}, Link{.id = "BC"}, Link{.id = "CD"}};
  std::vector<User> users{
      User{.id = "0", .route = {"CD"}},
      User{.id = "1", .route = {"BC", "CD"}},
      User{.id = "2", .route = {"AB", "BC", "CD"}},
  };
  return build_network(std::move(links), std::move(users));
}

Network builtin_network(std::string_view name) {
  if (name == "single-link") return single_link_network();
  if (name == "parking-lot") return parking_lot_network();
  throw TopologyError("unknown built-in scenario '" + std::string(name) + "'");
}

namespace {

double parse_number(const std::string& token, int line_no) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw TopologyError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
  return value;
}

std::vector<std::string> split_route(const std::string& token) {
  std::vector<std::string> hops;
  std::string hop;
  std::istringstream in(token);
  while (std::getline(in, hop, ',')) {
    if (!hop.empty()) hops.push_back(hop);
  }
  return hops;
}

}  // namespace

Network parse_topology(std::string_view text) {
  std::vector<Link> links;
  std::vector<User> users;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() < 2 || tok.size() % 2 != 0)
      throw TopologyError("line " + std::to_string(line_no) + ": expected '<kind> <id> (key value)*'");

    const auto where = "line " + std::to_string(line_no) + ": ";
    if (tok[0] == "link") {
      Link link{.id = tok[1]};
      for (std::size_t i = 2; i < tok.size(); i += 2) {
        const auto& key = tok[i];
        const double v = parse_number(tok[i + 1], line_no);
        if (key == "capacity") link.capacity = v;
        else if (key == "min_rate") link.min_rate = v;
        else if (key == "serv_delay") link.serv_delay = v;
        else if (key == "prop_delay") link.propagation_delay = v;
        else throw TopologyError(where + "unknown link key '" + key + "'");
      }
      links.push_back(std::move(link));
    } else if (tok[0] == "user") {
      User user;
      user.id = tok[1];
      for (std::size_t i = 2; i < tok.size(); i += 2) {
        const auto& key = tok[i];
        if (key == "route") {
          user.route = split_route(tok[i + 1]);
          continue;
        }
        const double v = parse_number(tok[i + 1], line_no);
        if (key == "x_max") user.x_max = v;
        else if (key == "x_min") user.x_min_req = v;
        else if (key == "buffer") user.buffer = v;
        else throw TopologyError(where + "unknown user key '" + key + "'");
      }
      users.push_back(std::move(user));
    } else {
      throw TopologyError(where + "unknown declaration '" + tok[0] + "'");
    }
  }
  if (links.empty() || users.empty()) throw TopologyError("topology needs at least one link and one user");
  return build_network(std::move(links), std::move(users));
}

Network load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_topology(buf.str());
}

}  // namespace numsim
