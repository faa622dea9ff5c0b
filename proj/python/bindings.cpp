#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "numsim/error.hpp"
#include "numsim/ls_estimator.hpp"
#include "numsim/num_core.hpp"
#include "numsim/sim_engine.hpp"
#include "numsim/topology.hpp"
#include "numsim/trace_io.hpp"
#include "numsim/wire_codec.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace numsim;

namespace {

LossPolicy make_loss(std::optional<std::int64_t> every, std::optional<std::pair<std::int64_t, std::int64_t>> range,
                     std::optional<double> prob, const std::string& target) {
  LossPolicy p;
  int chosen = every.has_value() + range.has_value() + prob.has_value();
  if (chosen > 1) throw ConfigError("loss_every, loss_range and loss_prob are mutually exclusive");
  if (every) p.kind = PeriodicLoss{*every};
  if (range) p.kind = RangeLoss{range->first, range->second};
  if (prob) p.kind = BernoulliLoss{*prob};
  if (target == "notify") p.target = LossTarget::kNotification;
  else if (target == "response") p.target = LossTarget::kResponse;
  else if (target == "random") p.target = LossTarget::kRandom;
  else throw ConfigError("loss target must be notify, response or random");
  p.validate();
  return p;
}

py::dict summary_dict(const Summary& s) {
  py::dict d;
  d["tracked_link"] = s.tracked_link_id;
  d["final_lambda"] = s.final_lambda;
  d["final_rates"] = s.final_rates;
  d["final_objective"] = s.final_objective;
  d["loss_iterations"] = s.loss_iterations;
  d["loss_errors"] = s.loss_errors;
  d["max_error"] = s.max_error;
  d["mean_error"] = s.mean_error;
  d["w_first"] = s.w_first;
  d["w_last"] = s.w_last;
  d["convergence_iteration"] = s.convergence_iteration;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Price-based congestion control simulator with least-squares loss recovery";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("utility", &utility, "x"_a);
  m.def("utility_slope", &utility_slope, "x"_a);
  m.def("user_demand", &user_demand, "price"_a, "x_max"_a = 10.0);
  m.def("step_size", &step_size, "t"_a, "sigma0"_a = 1.0);
  m.def("price_update", &price_update, "lam"_a, "sigma"_a, "capacity"_a, "flow"_a, "lambda_min"_a = 0.0);

  m.def("checksum", [](py::bytes data) {
    const std::string s = data;
    return checksum(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
  }, "data"_a);
  m.def("encode", [](int code, std::uint16_t identifier, std::uint16_t sequence, std::uint32_t timestamp_ms,
                     double payload) {
    PriceMessage msg;
    msg.code = static_cast<std::uint8_t>(code);
    msg.identifier = identifier;
    msg.sequence = sequence;
    msg.timestamp_ms = timestamp_ms;
    msg.payload = payload;
    const Frame f = encode(msg);
    return py::bytes(reinterpret_cast<const char*>(f.data()), f.size());
  }, "code"_a, "identifier"_a = 0, "sequence"_a = 0, "timestamp_ms"_a = 0, "payload"_a = 0.0);
  m.def("decode", [](py::bytes data) {
    const std::string s = data;
    const auto msg = decode(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    return py::dict("msg_type"_a = msg.msg_type, "code"_a = msg.code, "checksum"_a = msg.checksum,
                    "identifier"_a = msg.identifier, "sequence"_a = msg.sequence,
                    "timestamp_ms"_a = msg.timestamp_ms, "payload"_a = msg.payload);
  }, "frame"_a);

  py::class_<LsAggregates>(m, "LsAggregates")
      .def(py::init<>())
      .def("observe", &LsAggregates::observe, "input"_a, "price"_a)
      .def("estimate", &LsAggregates::estimate)
      .def("predict", [](const LsAggregates& a, double lam) { return predict_interval(a, lam); }, "lambda_next"_a)
      .def_property_readonly("s_xy", &LsAggregates::s_xy)
      .def_property_readonly("s_xx", &LsAggregates::s_xx)
      .def_property_readonly("count", &LsAggregates::count)
      .def_property_readonly("has_estimate", &LsAggregates::has_estimate);

  m.def("run", [](const std::string& scenario, const std::string& topology, std::int64_t iterations,
                  std::uint64_t seed, double sigma0, double lambda_min, std::optional<std::int64_t> loss_every,
                  std::optional<std::pair<std::int64_t, std::int64_t>> loss_range, std::optional<double> loss_prob,
                  const std::string& loss_target, std::optional<std::int64_t> gamma, bool feed_estimates) {
    ScenarioConfig cfg;
    cfg.network = topology.empty() ? builtin_network(scenario) : parse_topology(topology);
    cfg.network_source = topology.empty() ? scenario : "<text>";
    cfg.iterations = iterations;
    cfg.seed = seed;
    cfg.sigma0 = sigma0;
    cfg.lambda_min = lambda_min;
    cfg.loss = make_loss(loss_every, loss_range, loss_prob, loss_target);
    cfg.gamma = gamma;
    cfg.feed_estimates = feed_estimates;
    cfg.validate();

    Trace trace;
    {
      py::gil_scoped_release release;
      trace = run_scenario(cfg);
    }
    std::ostringstream csv;
    write_trace(trace, csv);
    py::dict out = summary_dict(summarize(trace));
    out["csv"] = csv.str();
    return out;
  }, "scenario"_a = "single-link", "topology"_a = "", "iterations"_a = 500, "seed"_a = 42, "sigma0"_a = 1.0,
     "lambda_min"_a = 0.0, "loss_every"_a = py::none(), "loss_range"_a = py::none(), "loss_prob"_a = py::none(),
     "loss_target"_a = "random", "gamma"_a = py::none(), "feed_estimates"_a = false,
     "Runs one scenario and returns its summary plus the CSV trace text. `topology` is the text of a "
     "topology file and overrides `scenario`.");
}
