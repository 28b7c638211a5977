#pragma once

#include <string>

#include "kgenfit/report.hpp"

namespace kgenfit::report {

// Two-panel tail plot (negative tail on -r, positive tail on r):
// empirical unconditional tail probabilities as points, the three fitted
// models as curves, logarithmic y axis. Output bytes are deterministic
// for fixed input and tool version.
std::string render_tail_plot(const InstrumentReport& rep, const TailSamples& tails);

}  // namespace kgenfit::report
