#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "numsim/loss.hpp"
#include "numsim/sim_engine.hpp"

namespace numsim {

struct RunOptions {
  std::string scenario;                 // built-in name, empty when a topology file is used
  std::string topology;                 // path, empty when a built-in scenario is used
  std::int64_t iterations = 500;
  std::uint64_t seed = 42;
  double sigma0 = 1.0;
  double lambda_min = 0.0;
  LossPolicy loss;
  std::optional<std::int64_t> gamma;
  bool feed_estimates = false;
  std::string out;                      // CSV path, empty for none
  bool summary = false;
  bool hex_frames = false;
  std::vector<std::int64_t> sweep_every;  // periodic policies to run side by side
  std::string help;                     // non-empty when --help was given
};

// Parses argv (argv[0] is the program name). NUMSIM_SEED, when set, is the
// seed default. Throws ConfigError with a one-line message on unknown flags,
// conflicting loss flags, a missing topology file or bad values.
RunOptions parse_args(int argc, const char* const* argv);

// Resolves the network and copies the run parameters into a config.
ScenarioConfig to_config(const RunOptions& options);

// Every option on one line, used as the summary header.
std::string describe(const RunOptions& options);

}  // namespace numsim
