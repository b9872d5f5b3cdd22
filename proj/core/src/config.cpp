#include "frplan/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "frplan/errors.hpp"
#include "frplan/table.hpp"

namespace frplan {

namespace {

using nlohmann::json;

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

void require_object(const json& node, const char* name) {
  if (!node.is_object()) bad(std::string(name) + " must be a JSON object");
}

void reject_unknown(const json& obj, const char* section,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known)
      bad("unknown key '" + item.key() + "' in section '" + section + "'");
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& into) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    into = it->get<T>();
  } catch (const json::exception&) {
    bad(std::string("invalid value for key '") + key + "'");
  }
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::ffr ? "ffr" : "sfr";
}

const char* design_name(DesignKind design) {
  switch (design) {
    case DesignKind::r5pd: return "r5pd";
    case DesignKind::fxd: return "fxd";
    default: return "qoscd";
  }
}

Scheme parse_scheme(const std::string& text) {
  if (text == "ffr") return Scheme::ffr;
  if (text == "sfr") return Scheme::sfr;
  bad("scheme must be 'ffr' or 'sfr', got '" + text + "'");
}

DesignKind parse_design(const std::string& text) {
  if (text == "r5pd") return DesignKind::r5pd;
  if (text == "fxd") return DesignKind::fxd;
  if (text == "qoscd") return DesignKind::qoscd;
  bad("design must be 'r5pd', 'fxd' or 'qoscd', got '" + text + "'");
}

DesignProblem RunConfig::design_problem() const {
  DesignProblem p;
  p.profile = profile;
  p.geom = geom;
  p.scheme = scheme;
  switch (design) {
    case DesignKind::r5pd: p.design = R5pD{v_o_bps}; break;
    case DesignKind::fxd: p.design = FxD{zeta_o}; break;
    case DesignKind::qoscd: p.design = QoScD{quality}; break;
  }
  p.grids = grids;
  p.model = model_options();
  p.threads = threads;
  return p;
}

SimConfig RunConfig::sim_config(double omega_pt, double zeta_pt) const {
  SimConfig sc;
  sc.profile = profile;
  sc.geom = geom;
  sc.scheme = scheme;
  sc.omega = omega_pt;
  sc.zeta = zeta_pt;
  sc.slots = slots;
  sc.drops = drops;
  sc.window = window;
  sc.warmup = warmup;
  sc.seed = seed;
  sc.threads = threads;
  return sc;
}

RunConfig load_run_config(const std::string& config_path,
                          const CliOverrides& overrides) {
  if (config_path.empty()) return parse_run_config("{}", overrides);
  std::ifstream fh(config_path, std::ios::binary);
  if (!fh) bad("cannot read config file: " + config_path);
  std::ostringstream text;
  text << fh.rdbuf();
  return parse_run_config(text.str(), overrides);
}

RunConfig parse_run_config(const std::string& json_text,
                           const CliOverrides& overrides) {
  RunConfig cfg;
  json root = parse_text(json_text);
  require_object(root, "config root");
  reject_unknown(root, "root",
                 {"profile", "geometry", "scheme", "design", "sim", "output", "seed"});

  bool density_given = false;
  if (root.contains("profile")) {
    const json& p = root["profile"];
    require_object(p, "profile");
    reject_unknown(p, "profile",
                   {"total_power_dbm", "antenna_gain_db", "noise_psd_dbm_hz",
                    "noise_figure_db", "subcarrier_spacing_hz",
                    "subcarriers_per_rb", "rb_bandwidth_hz", "num_rbs",
                    "mean_users", "user_density", "pathloss_offset_db",
                    "pathloss_slope_db"});
    if (p.contains("total_power_dbm")) {
      double dbm = 46.0;
      read_field(p, "total_power_dbm", dbm);
      cfg.profile.total_power_w = dbm_to_watt(dbm);
    }
    read_field(p, "antenna_gain_db", cfg.profile.antenna_gain_db);
    if (p.contains("noise_psd_dbm_hz")) {
      double dbm = -174.0;
      read_field(p, "noise_psd_dbm_hz", dbm);
      cfg.profile.noise_psd_w_hz = dbm_to_watt(dbm);
    }
    read_field(p, "noise_figure_db", cfg.profile.noise_figure_db);
    read_field(p, "subcarrier_spacing_hz", cfg.profile.subcarrier_spacing_hz);
    read_field(p, "subcarriers_per_rb", cfg.profile.subcarriers_per_rb);
    read_field(p, "rb_bandwidth_hz", cfg.profile.rb_bandwidth_hz);
    read_field(p, "num_rbs", cfg.profile.num_rbs);
    read_field(p, "pathloss_offset_db", cfg.profile.pathloss.offset_db);
    read_field(p, "pathloss_slope_db", cfg.profile.pathloss.slope_db);
    if (p.contains("mean_users") && p.contains("user_density"))
      bad("profile: give either mean_users or user_density, not both");
    read_field(p, "mean_users", cfg.mean_users);
    if (p.contains("user_density")) {
      density_given = true;
      read_field(p, "user_density", cfg.profile.user_density);
    }
  }

  if (root.contains("geometry")) {
    const json& g = root["geometry"];
    require_object(g, "geometry");
    reject_unknown(g, "geometry",
                   {"cell_radius_m", "cell_radius_is", "min_distance_m"});
    read_field(g, "cell_radius_m", cfg.cell_radius_m);
    read_field(g, "cell_radius_is", cfg.cell_radius_is);
    read_field(g, "min_distance_m", cfg.min_distance_m);
  }

  if (root.contains("scheme")) {
    std::string name;
    read_field(root, "scheme", name);
    cfg.scheme = parse_scheme(name);
  }

  if (root.contains("design")) {
    const json& d = root["design"];
    require_object(d, "design");
    reject_unknown(d, "design",
                   {"kind", "v_o_bps", "zeta_o", "quality", "omega_step",
                    "beta_step", "omega", "zeta", "v_o_grid_bps",
                    "mean_users_grid"});
    if (d.contains("kind")) {
      std::string name;
      read_field(d, "kind", name);
      cfg.design = parse_design(name);
    }
    read_field(d, "v_o_bps", cfg.v_o_bps);
    read_field(d, "zeta_o", cfg.zeta_o);
    read_field(d, "quality", cfg.quality);
    read_field(d, "omega_step", cfg.grids.omega_step);
    read_field(d, "beta_step", cfg.grids.beta_step);
    if (d.contains("omega")) {
      double w = 0.0;
      read_field(d, "omega", w);
      cfg.omega = w;
    }
    if (d.contains("zeta")) {
      double z = 0.0;
      read_field(d, "zeta", z);
      cfg.zeta = z;
    }
    read_field(d, "v_o_grid_bps", cfg.v_o_grid_bps);
    read_field(d, "mean_users_grid", cfg.mean_users_grid);
  }

  if (root.contains("sim")) {
    const json& s = root["sim"];
    require_object(s, "sim");
    reject_unknown(s, "sim", {"slots", "drops", "window", "warmup", "threads"});
    read_field(s, "slots", cfg.slots);
    read_field(s, "drops", cfg.drops);
    read_field(s, "window", cfg.window);
    read_field(s, "warmup", cfg.warmup);
    read_field(s, "threads", cfg.threads);
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    require_object(o, "output");
    reject_unknown(o, "output", {"dir", "cdf_points"});
    read_field(o, "dir", cfg.out_dir);
    read_field(o, "cdf_points", cfg.cdf_points);
  }

  read_field(root, "seed", cfg.seed);

  // command-line overrides
  if (overrides.scheme) cfg.scheme = *overrides.scheme;
  if (overrides.design) cfg.design = *overrides.design;
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  cfg.desk_scale = overrides.desk_scale;
  cfg.with_sim = overrides.with_sim;
  if (cfg.desk_scale) {
    cfg.profile.num_rbs = 12;
    cfg.slots = 50000;
    cfg.drops = 40;
  }

  // resolve the cell geometry and the user density
  if (!(cfg.cell_radius_m > 0.0) || !(cfg.min_distance_m > 0.0))
    bad("geometry radii must be positive");
  if (cfg.cell_radius_is == "hex_side") {
    cfg.geom = CellGeometry::from_hex_side(cfg.cell_radius_m, cfg.min_distance_m);
  } else if (cfg.cell_radius_is == "circ_radius") {
    cfg.geom = CellGeometry::from_circ_radius(cfg.cell_radius_m, cfg.min_distance_m);
  } else {
    bad("cell_radius_is must be 'hex_side' or 'circ_radius'");
  }
  double area = std::numbers::pi * (cfg.geom.circ_radius * cfg.geom.circ_radius -
                                    cfg.geom.min_dist * cfg.geom.min_dist);
  if (density_given) {
    cfg.mean_users = cfg.profile.user_density * area;
  } else {
    if (!(cfg.mean_users > 0.0) || !std::isfinite(cfg.mean_users))
      bad("mean_users must be positive and finite");
    cfg.profile.user_density = cfg.mean_users / area;
  }

  // validate against module invariants before any computation
  cfg.profile.validate();
  cfg.design_problem().validate();
  if (cfg.slots < 1 || cfg.drops < 1 || cfg.window < 1)
    bad("sim counts must be positive");
  if (cfg.threads < 0) bad("threads must be non-negative");
  if (cfg.cdf_points < 2) bad("cdf_points must be at least 2");
  if (cfg.omega.has_value() != cfg.zeta.has_value())
    bad("set both design.omega and design.zeta or neither");
  if (cfg.omega) {
    double lo = cfg.geom.min_dist / cfg.geom.circ_radius;
    if (!(*cfg.omega >= lo && *cfg.omega <= 1.0))
      bad("design.omega must lie in [min_dist/circ_radius, 1]");
    make_partition(cfg.profile, cfg.scheme, *cfg.zeta);  // validates zeta
  }
  for (double v : cfg.v_o_grid_bps)
    if (!(v >= 0.0) || !std::isfinite(v)) bad("v_o_grid_bps entries must be finite and non-negative");
  for (double m : cfg.mean_users_grid)
    if (!(m > 0.0) || !std::isfinite(m)) bad("mean_users_grid entries must be positive and finite");
  if (cfg.v_o_grid_bps.empty())
    cfg.v_o_grid_bps = {1e5, 4e5, 7e5, 1e6, 1.3e6};
  if (cfg.mean_users_grid.empty())
    cfg.mean_users_grid = {2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};

  // fingerprint of the resolved settings (output location excluded: it does
  // not affect computed content)
  json fp;
  fp["profile"] = {{"total_power_dbm", watt_to_dbm(cfg.profile.total_power_w)},
                   {"antenna_gain_db", cfg.profile.antenna_gain_db},
                   {"noise_psd_dbm_hz", watt_to_dbm(cfg.profile.noise_psd_w_hz)},
                   {"noise_figure_db", cfg.profile.noise_figure_db},
                   {"subcarrier_spacing_hz", cfg.profile.subcarrier_spacing_hz},
                   {"subcarriers_per_rb", cfg.profile.subcarriers_per_rb},
                   {"rb_bandwidth_hz", cfg.profile.rb_bandwidth_hz},
                   {"num_rbs", cfg.profile.num_rbs},
                   {"mean_users", cfg.mean_users},
                   {"pathloss_offset_db", cfg.profile.pathloss.offset_db},
                   {"pathloss_slope_db", cfg.profile.pathloss.slope_db}};
  fp["geometry"] = {{"cell_radius_m", cfg.cell_radius_m},
                    {"cell_radius_is", cfg.cell_radius_is},
                    {"min_distance_m", cfg.min_distance_m}};
  fp["scheme"] = scheme_name(cfg.scheme);
  fp["design"] = {{"kind", design_name(cfg.design)},
                  {"v_o_bps", cfg.v_o_bps},
                  {"zeta_o", cfg.zeta_o},
                  {"quality", cfg.quality},
                  {"omega_step", cfg.grids.omega_step},
                  {"beta_step", cfg.grids.beta_step},
                  {"v_o_grid_bps", cfg.v_o_grid_bps},
                  {"mean_users_grid", cfg.mean_users_grid}};
  if (cfg.omega) fp["design"]["omega"] = *cfg.omega;
  if (cfg.zeta) fp["design"]["zeta"] = *cfg.zeta;
  fp["sim"] = {{"slots", cfg.slots},
               {"drops", cfg.drops},
               {"window", cfg.window},
               {"warmup", cfg.warmup}};
  fp["cdf_points"] = cfg.cdf_points;
  fp["seed"] = cfg.seed;
  fp["with_sim"] = cfg.with_sim;
  cfg.fingerprint = fingerprint_hex(fp.dump());
  return cfg;
}

}  // namespace frplan
