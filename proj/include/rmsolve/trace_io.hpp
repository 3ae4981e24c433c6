#pragma once

#include <iosfwd>
#include <string>

#include "rmsolve/driver.hpp"

namespace rmsolve {

/// Column header of the trace CSV (no trailing newline).
const std::string& trace_csv_header();

/// One row per checkpoint, reals as %.16e (17 significant digits). Traces of
/// tree games start with a '#' line describing the gap and rnorm columns.
void write_trace_csv(std::ostream& os, const Trace& trace);

}  // namespace rmsolve
