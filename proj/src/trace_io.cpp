#include "numsim/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "numsim/error.hpp"

namespace numsim {

std::string format_decimal(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

std::string cell(const std::optional<double>& value) {
  return value ? format_decimal(*value) : std::string();
}

}  // namespace

void write_trace(const Trace& trace, std::ostream& out) {
  if (trace.records.empty()) throw Error("write_trace: empty trace");
  out << kTraceHeader << '\n';
  for (const auto& rec : trace.records) {
    const std::string objective = format_decimal(rec.objective);
    const char* loss = rec.estimate_used() ? "1" : "0";
    for (std::size_t s = 0; s < trace.user_ids.size(); ++s) {
      const std::size_t l = trace.user_bottleneck[s];
      out << rec.iteration << ',' << trace.link_ids[l] << ',' << format_decimal(rec.lambda[l]) << ','
          << trace.user_ids[s] << ',' << format_decimal(rec.rates[s]) << ','
          << format_decimal(rec.h_actual[l]) << ',' << cell(rec.h_estimated[l]) << ','
          << cell(rec.delta_h[l]) << ',' << cell(rec.w[l]) << ',' << cell(rec.w_x[s]) << ',' << loss
          << ',' << objective << '\n';
    }
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_trace(trace, out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

void print_summary(const Summary& summary, const Trace& trace, std::ostream& out) {
  out << "convergence: ";
  if (summary.convergence_iteration) out << "iteration " << *summary.convergence_iteration << '\n';
  else out << "not reached\n";

  out << "final prices:";
  for (std::size_t l = 0; l < summary.final_lambda.size(); ++l)
    out << ' ' << trace.link_ids[l] << '=' << format_decimal(summary.final_lambda[l]);
  out << "\nfinal rates:";
  for (std::size_t s = 0; s < summary.final_rates.size(); ++s)
    out << ' ' << trace.user_ids[s] << '=' << format_decimal(summary.final_rates[s]);
  out << "\nobjective: " << format_decimal(summary.final_objective) << '\n';

  out << "w (" << summary.tracked_link_id << "): ";
  if (summary.w_first) out << format_decimal(*summary.w_first) << " -> " << format_decimal(*summary.w_last) << '\n';
  else out << "n/a\n";

  out << "loss iterations: " << summary.loss_iterations.size() << '\n';
  out << "estimation: ";
  if (summary.max_error) {
    out << "max " << format_decimal(*summary.max_error) << " mean " << format_decimal(*summary.mean_error)
        << " over " << summary.loss_errors.size() << " predictions on " << summary.tracked_link_id << '\n';
  } else {
    out << "n/a\n";
  }
}

}  // namespace numsim
