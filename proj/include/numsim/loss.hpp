#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

namespace numsim {

// Seeded generator for every random decision in a run. The engine is
// std::mt19937_64, whose output sequence the standard fixes, and doubles are
// built from the top 53 bits, so a seed gives the same stream on every
// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

struct NoLoss {};
struct PeriodicLoss {
  std::int64_t every = 1;
};
struct RangeLoss {
  std::int64_t first = 0;
  std::int64_t last = 0;
};
struct BernoulliLoss {
  double probability = 0.0;
};

enum class LossTarget { kNotification, kResponse, kRandom };

struct LossPolicy {
  std::variant<NoLoss, PeriodicLoss, RangeLoss, BernoulliLoss> kind = NoLoss{};
  LossTarget target = LossTarget::kRandom;

  // Throws ConfigError when a parameter is out of range.
  void validate() const;
  std::string describe() const;
};

enum class Drop { kNone, kNotification, kResponse };

// Decides what, if anything, is dropped at iteration t. A drop takes out
// every message of the chosen class for that iteration. Consumes rng draws
// only for bernoulli policies and for the notification/response coin.
Drop inject_loss(const LossPolicy& policy, std::int64_t t, Rng& rng);

const char* to_string(Drop drop);
const char* to_string(LossTarget target);

}  // namespace numsim
