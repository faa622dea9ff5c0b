#include "numsim/cli_options.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <sstream>

#include "numsim/error.hpp"

namespace numsim {

namespace {

RangeLoss parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--loss-range expects A:B, got '" + text + "'");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    RangeLoss r{std::stoll(a, &used_a), std::stoll(b, &used_b)};
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(text);
    return r;
  } catch (const std::logic_error&) {
    throw ConfigError("--loss-range expects integers A:B, got '" + text + "'");
  }
}

}  // namespace

RunOptions parse_args(int argc, const char* const* argv) {
  RunOptions opts;
  CLI::App app{"Price-based congestion control simulator with least-squares loss recovery", "numsim"};

  std::optional<std::int64_t> loss_every;
  std::string loss_range;
  std::optional<double> loss_prob;
  std::string loss_target = "random";
  std::string sweep;

  auto* scenario = app.add_option("--scenario", opts.scenario, "Built-in network: single-link | parking-lot")
                       ->check(CLI::IsMember({"single-link", "parking-lot"}));
  auto* topology = app.add_option("--topology", opts.topology, "Topology file");
  scenario->excludes(topology);
  app.add_option("--iterations", opts.iterations, "Iterations to run")->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "RNG seed")->envname("NUMSIM_SEED");
  app.add_option("--sigma0", opts.sigma0, "Initial step size")->check(CLI::PositiveNumber);
  app.add_option("--lambda-min", opts.lambda_min, "Price floor")->check(CLI::NonNegativeNumber);
  auto* every = app.add_option("--loss-every", loss_every, "Drop at every K-th iteration")->check(CLI::PositiveNumber);
  auto* range = app.add_option("--loss-range", loss_range, "Drop on iterations A..B inclusive");
  auto* prob = app.add_option("--loss-prob", loss_prob, "Drop each iteration with probability P")
                   ->check(CLI::Range(0.0, 1.0));
  every->excludes(range)->excludes(prob);
  range->excludes(prob);
  app.add_option("--loss-target", loss_target, "Dropped class: notify | response | random")
      ->check(CLI::IsMember({"notify", "response", "random"}));
  app.add_option("--gamma", opts.gamma, "Correction window length in iterations")->check(CLI::PositiveNumber);
  app.add_flag("--feed-estimates", opts.feed_estimates, "Fold estimates made during loss into the fit");
  app.add_option("--out", opts.out, "CSV trace path");
  app.add_flag("--summary", opts.summary, "Print a run summary");
  app.add_flag("--hex-frames", opts.hex_frames, "Dump every wire frame as hex to stderr");
  app.add_option("--sweep", sweep, "Comma-separated K values; runs --loss-every K for each concurrently")
      ->excludes(every)
      ->excludes(range)
      ->excludes(prob);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    opts.help = app.help();
    return opts;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (opts.scenario.empty() && opts.topology.empty()) opts.scenario = "single-link";
  if (!opts.topology.empty() && !std::filesystem::is_regular_file(opts.topology))
    throw ConfigError("topology file not found: " + opts.topology);

  if (loss_every) opts.loss.kind = PeriodicLoss{*loss_every};
  else if (!loss_range.empty()) opts.loss.kind = parse_range(loss_range);
  else if (loss_prob) opts.loss.kind = BernoulliLoss{*loss_prob};
  if (loss_target == "notify") opts.loss.target = LossTarget::kNotification;
  else if (loss_target == "response") opts.loss.target = LossTarget::kResponse;
  else opts.loss.target = LossTarget::kRandom;
  opts.loss.validate();

  if (!sweep.empty()) {
    std::istringstream in(sweep);
    for (std::string item; std::getline(in, item, ',');) {
      try {
        std::size_t used = 0;
        const auto k = std::stoll(item, &used);
        if (used != item.size() || k < 1) throw std::invalid_argument(item);
        opts.sweep_every.push_back(k);
      } catch (const std::logic_error&) {
        throw ConfigError("--sweep expects positive integers, got '" + item + "'");
      }
    }
  }
  return opts;
}

ScenarioConfig to_config(const RunOptions& options) {
  ScenarioConfig cfg;
  if (!options.topology.empty()) {
    cfg.network = load_topology(options.topology);
    cfg.network_source = options.topology;
  } else {
    cfg.network = builtin_network(options.scenario);
    cfg.network_source = options.scenario;
  }
  cfg.iterations = options.iterations;
  cfg.seed = options.seed;
  cfg.sigma0 = options.sigma0;
  cfg.lambda_min = options.lambda_min;
  cfg.loss = options.loss;
  cfg.gamma = options.gamma;
  cfg.feed_estimates = options.feed_estimates;
  cfg.validate();
  return cfg;
}

std::string describe(const RunOptions& o) {
  std::ostringstream out;
  out << "network=" << (o.topology.empty() ? o.scenario : o.topology) << " iterations=" << o.iterations
      << " seed=" << o.seed << " sigma0=" << o.sigma0 << " lambda_min=" << o.lambda_min
      << " loss=" << o.loss.describe() << " gamma=";
  if (o.gamma) out << *o.gamma;
  else out << "auto";
  out << " feed_estimates=" << (o.feed_estimates ? "on" : "off") << " out=" << (o.out.empty() ? "-" : o.out)
      << " summary=" << (o.summary ? "on" : "off") << " hex_frames=" << (o.hex_frames ? "on" : "off");
  if (!o.sweep_every.empty()) {
    out << " sweep=";
    for (std::size_t i = 0; i < o.sweep_every.size(); ++i) out << (i ? "," : "") << o.sweep_every[i];
  }
  return out.str();
}

}  // namespace numsim
