#pragma once

#include <string>
#include <utility>
#include <vector>

#include "frplan/config.hpp"

namespace frplan {

// In-memory result of one CLI command: output files (name -> exact bytes)
// plus a one-line-per-fact summary for stdout. Bytes are a pure function of
// the resolved run config, so identical configs diff clean.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
  // 0 = success; 4 = the requested design is infeasible (outputs are still
  // emitted for the closest point).
  int exit_code = 0;
};

// User-throughput CDF at the designed (or explicitly configured) operating
// point, optionally paired with a simulated empirical CDF.
CommandOutput cmd_cdf(const RunConfig& cfg);
// Best split and cell throughput per distance-threshold ratio.
CommandOutput cmd_sweep_omega(const RunConfig& cfg);
// Rate-floor solve per target in the configured grid.
CommandOutput cmd_pareto(const RunConfig& cfg);
// Rate-floor solve per mean user count at a fixed floor.
CommandOutput cmd_load_sweep(const RunConfig& cfg);
// Fairness index of the designed operating point per rate floor.
CommandOutput cmd_jain(const RunConfig& cfg);
// Event-level simulation at the designed (or configured) operating point.
CommandOutput cmd_simulate(const RunConfig& cfg);
// Design solve with the full evaluation trace.
CommandOutput cmd_optimize(const RunConfig& cfg);

// Write every output file plus the generic plot renderer into out_dir,
// creating it if needed.
void write_outputs(const CommandOutput& out, const std::string& out_dir);

}  // namespace frplan
