#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "numsim/sim_engine.hpp"

namespace numsim {

inline constexpr const char* kTraceHeader =
    "iter,link,price,user,rate,h_actual,h_estimated,delta_h,w,w_x,loss,objective";

// One CSV row per (iteration, user). Link columns come from the user's
// bottleneck link. Undefined values are empty cells; decimals use nine
// significant digits.
void write_trace(const Trace& trace, std::ostream& out);
// Throws Error if the file cannot be written or the trace is empty.
void write_trace(const Trace& trace, const std::filesystem::path& path);

// Nine significant digits, shortest of fixed/scientific ("%.9g").
std::string format_decimal(double value);

void print_summary(const Summary& summary, const Trace& trace, std::ostream& out);

}  // namespace numsim
