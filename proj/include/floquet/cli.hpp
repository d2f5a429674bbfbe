#pragma once

#include <ostream>

#include "floquet/runconfig.hpp"

namespace floquet {

// Command entry points. Each resolves defaults, echoes the effective
// configuration into the output directory, writes its report files, and
// returns the process exit code:
//   0  all requested checks passed
//   1  a verification predicate was falsified
//   2  invalid input (spec file, parameter ranges)
//   3  numerical failure (integrator breakdown, unresolvable winding)
// All file output is deterministic: fixed column order, 17 significant digits,
// '.' decimal separator, no timestamps.
int cmd_norm(const RunConfig& config, std::ostream& out);
int cmd_localize(const RunConfig& config, std::ostream& out);
int cmd_bands(const RunConfig& config, std::ostream& out);
int cmd_gaps(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_determinant(const RunConfig& config, std::ostream& out);

// Shared 17-significant-digit formatting.
std::string format_number(double value);

}  // namespace floquet
