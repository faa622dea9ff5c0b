// numsim: run a pricing scenario and write its trace.
//
//   numsim --scenario parking-lot --loss-every 50 --out trace.csv --summary
//   numsim --scenario parking-lot --sweep 50,40,30,20,10,5 --out trace.csv

#include <filesystem>
#include <future>
#include <iostream>
#include <mutex>

#include "numsim/cli_options.hpp"
#include "numsim/error.hpp"
#include "numsim/trace_io.hpp"

namespace {

std::filesystem::path sweep_path(const std::string& out, std::int64_t k) {
  std::filesystem::path p(out);
  return p.parent_path() / (p.stem().string() + "_k" + std::to_string(k) + p.extension().string());
}

int run(const numsim::RunOptions& opts) {
  std::mutex io;
  numsim::FrameSink sink;
  if (opts.hex_frames) {
    sink = [&io](const numsim::Frame& frame, bool dropped) {
      std::lock_guard lock(io);
      std::cerr << (dropped ? "drop " : "send ") << numsim::to_hex(frame) << '\n';
    };
  }

  if (opts.sweep_every.empty()) {
    const auto cfg = numsim::to_config(opts);
    const auto trace = numsim::run_scenario(cfg, sink);
    if (!opts.out.empty()) numsim::write_trace(trace, std::filesystem::path(opts.out));
    if (opts.summary || opts.out.empty()) {
      std::cout << "# " << numsim::describe(opts) << '\n';
      numsim::print_summary(numsim::summarize(trace, cfg.convergence_tol), trace, std::cout);
    }
    return 0;
  }

  std::vector<std::future<std::pair<numsim::RunOptions, numsim::Trace>>> jobs;
  for (std::int64_t k : opts.sweep_every) {
    numsim::RunOptions one = opts;
    one.sweep_every.clear();
    one.loss.kind = numsim::PeriodicLoss{k};
    if (!opts.out.empty()) one.out = sweep_path(opts.out, k).string();
    jobs.push_back(std::async(std::launch::async, [one, sink] {
      auto trace = numsim::run_scenario(numsim::to_config(one), sink);
      if (!one.out.empty()) numsim::write_trace(trace, std::filesystem::path(one.out));
      return std::pair{one, std::move(trace)};
    }));
  }
  for (auto& job : jobs) {
    auto [one, trace] = job.get();
    if (opts.summary || opts.out.empty()) {
      std::cout << "# " << numsim::describe(one) << '\n';
      numsim::print_summary(numsim::summarize(trace), trace, std::cout);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const auto opts = numsim::parse_args(argc, argv);
    if (!opts.help.empty()) {
      std::cout << opts.help;
      return 0;
    }
    return run(opts);
  } catch (const std::exception& e) {
    std::cerr << "numsim: " << e.what() << '\n';
    return 1;
  }
}
