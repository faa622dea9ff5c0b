#include "numsim/loss.hpp"

#include <sstream>

#include "numsim/error.hpp"

namespace numsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void LossPolicy::validate() const {
  std::visit(Overloaded{
                 [](const NoLoss&) {},
                 [](const PeriodicLoss& p) {
                   if (p.every < 1) throw ConfigError("periodic loss needs k >= 1");
                 },
                 [](const RangeLoss& r) {
                   if (r.first > r.last) throw ConfigError("loss range needs a <= b");
                 },
                 [](const BernoulliLoss& b) {
                   if (!(b.probability >= 0.0 && b.probability <= 1.0))
                     throw ConfigError("loss probability must lie in [0, 1]");
                 },
             },
             kind);
}

std::string LossPolicy::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const NoLoss&) { out << "none"; },
                 [&](const PeriodicLoss& p) { out << "periodic(" << p.every << ")"; },
                 [&](const RangeLoss& r) { out << "range(" << r.first << "," << r.last << ")"; },
                 [&](const BernoulliLoss& b) { out << "bernoulli(" << b.probability << ")"; },
             },
             kind);
  if (!std::holds_alternative<NoLoss>(kind)) out << " target=" << to_string(target);
  return out.str();
}

Drop inject_loss(const LossPolicy& policy, std::int64_t t, Rng& rng) {
  const bool hit = std::visit(Overloaded{
                                  [](const NoLoss&) { return false; },
                                  [&](const PeriodicLoss& p) { return t % p.every == 0; },
                                  [&](const RangeLoss& r) { return r.first <= t && t <= r.last; },
                                  [&](const BernoulliLoss& b) { return rng.uniform() < b.probability; },
                              },
                              policy.kind);
  if (!hit) return Drop::kNone;
  switch (policy.target) {
    case LossTarget::kNotification:
      return Drop::kNotification;
    case LossTarget::kResponse:
      return Drop::kResponse;
    case LossTarget::kRandom:
      break;
  }
  return rng.coin() ? Drop::kResponse : Drop::kNotification;
}

const char* to_string(Drop drop) {
  switch (drop) {
    case Drop::kNone:
      return "none";
    case Drop::kNotification:
      return "notification";
    case Drop::kResponse:
      return "response";
  }
  return "?";
}

const char* to_string(LossTarget target) {
  switch (target) {
    case LossTarget::kNotification:
      return "notify";
    case LossTarget::kResponse:
      return "response";
    case LossTarget::kRandom:
      return "random";
  }
  return "?";
}

}  // namespace numsim
