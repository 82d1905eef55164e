#pragma once

#include <string>

#include "rootcp/bench.hpp"

namespace rootcp::bench {

/// Machine-readable report. Timings are left out unless requested so that equal inputs give
/// byte-identical output; non-finite numbers are written as the strings "inf" / "-inf".
std::string to_json(const BenchReport& report, bool include_timing = false);
/// Aligned text table of the summary.
std::string to_table(const BenchReport& report);
/// One line per repetition and method.
std::string to_csv(const BenchReport& report);

}  // namespace rootcp::bench
