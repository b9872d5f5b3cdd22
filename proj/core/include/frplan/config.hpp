#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/optimize.hpp"
#include "frplan/radio.hpp"
#include "frplan/sim.hpp"
#include "frplan/throughput.hpp"

namespace frplan {

enum class DesignKind { r5pd, fxd, qoscd };

const char* scheme_name(Scheme scheme);
const char* design_name(DesignKind design);
Scheme parse_scheme(const std::string& text);        // throws ConfigError
DesignKind parse_design(const std::string& text);    // throws ConfigError

// Command-line overrides applied on top of the config file.
struct CliOverrides {
  std::optional<Scheme> scheme;
  std::optional<DesignKind> design;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool desk_scale = false;  // 12-RB preset: quick runs and cross-checks
  bool with_sim = false;    // pair the analytic CDF with a simulated one
};

// Fully resolved run settings: built-in defaults (full-scale 100-RB network,
// 32 mean users), then the config file, then CLI overrides.
struct RunConfig {
  NetworkProfile profile;  // user_density resolved from mean_users
  double mean_users = 32.0;
  CellGeometry geom;       // resolved from the radius interpretation switch
  std::string cell_radius_is = "hex_side";  // or "circ_radius"
  double cell_radius_m = 500.0;
  double min_distance_m = 35.0;

  Scheme scheme = Scheme::ffr;
  DesignKind design = DesignKind::r5pd;
  double v_o_bps = 1e6;   // R5pD rate floor
  double zeta_o = 0.5;    // FxD fixed split
  double quality = 0.2;   // QoScD edge/center ratio
  DesignGrids grids;
  // Explicit operating point (both set or both unset); when unset, commands
  // that need one solve the configured design first.
  std::optional<double> omega;
  std::optional<double> zeta;
  std::vector<double> v_o_grid_bps;     // pareto / jain sweeps
  std::vector<double> mean_users_grid;  // load sweep

  int slots = 50000;
  int drops = 40;
  int window = 100;
  int warmup = -1;
  int threads = 0;

  std::string out_dir = ".";
  int cdf_points = 200;

  std::uint64_t seed = 0;
  bool desk_scale = false;
  bool with_sim = false;
  std::string fingerprint;  // hash of the resolved settings (excludes out_dir)

  DesignProblem design_problem() const;
  SimConfig sim_config(double omega_pt, double zeta_pt) const;
  ModelOptions model_options() const {
    ModelOptions opts;
    opts.cdf_grid_points = cdf_points;
    return opts;
  }
};

// Parse, resolve, and validate. An empty path applies defaults + overrides
// only. Throws ConfigError for unreadable files, malformed JSON, unknown
// keys, or values violating module invariants.
RunConfig load_run_config(const std::string& config_path,
                          const CliOverrides& overrides);
RunConfig parse_run_config(const std::string& json_text,
                           const CliOverrides& overrides);

}  // namespace frplan
