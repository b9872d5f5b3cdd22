#include "frplan/radio.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "frplan/errors.hpp"

namespace frplan {

double PathlossModel::db(double d) const {
  return offset_db + slope_db * std::log10(d);
}

double PathlossModel::gain(double d) const {
  return std::pow(10.0, -0.1 * db(d));
}

double NetworkProfile::antenna_gain_lin() const {
  return std::pow(10.0, 0.1 * antenna_gain_db);
}

double NetworkProfile::noise_power_w() const {
  return noise_psd_w_hz * std::pow(10.0, 0.1 * noise_figure_db) *
         subcarrier_spacing_hz;
}

double NetworkProfile::link_gain(double d) const {
  return antenna_gain_lin() * pathloss.gain(d);
}

double NetworkProfile::mean_users(const CellGeometry& geom) const {
  return user_density * std::numbers::pi *
         (geom.circ_radius * geom.circ_radius - geom.min_dist * geom.min_dist);
}

void NetworkProfile::validate() const {
  if (!(total_power_w > 0.0)) throw ConfigError("total transmit power must be positive");
  if (!(noise_psd_w_hz > 0.0)) throw ConfigError("noise PSD must be positive");
  if (!(noise_figure_db >= 0.0)) throw ConfigError("noise figure must be non-negative");
  if (!(subcarrier_spacing_hz > 0.0)) throw ConfigError("subcarrier spacing must be positive");
  if (subcarriers_per_rb < 1) throw ConfigError("subcarriers per RB must be at least 1");
  if (num_rbs < 1) throw ConfigError("RB count must be at least 1");
  if (!(user_density >= 0.0)) throw ConfigError("user density must be non-negative");
  double expected_rb_bw = subcarrier_spacing_hz * subcarriers_per_rb;
  if (std::abs(rb_bandwidth_hz - expected_rb_bw) > 1e-6 * expected_rb_bw) {
    throw ConfigError("RB bandwidth must equal subcarrier spacing times subcarriers per RB");
  }
  if (!(pathloss.slope_db > 0.0)) throw ConfigError("pathloss slope must be positive");
}

std::vector<double> valid_rho_set(int num_rbs) {
  std::vector<double> rhos;
  for (int n_edge = num_rbs / 3; n_edge >= 0; --n_edge) {
    rhos.push_back(static_cast<double>(num_rbs - 3 * n_edge) / num_rbs);
  }
  return rhos;
}

SpectrumPartition make_partition(const NetworkProfile& profile, Scheme scheme,
                                 double zeta) {
  profile.validate();
  SpectrumPartition part;
  part.scheme = scheme;
  part.zeta = zeta;
  const double n = profile.num_rbs;
  if (scheme == Scheme::ffr) {
    // zeta is the center fraction rho and must split the band into integral
    // per-band RB counts.
    bool valid = false;
    for (double rho : valid_rho_set(profile.num_rbs)) {
      if (std::abs(rho - zeta) < 1e-9) {
        zeta = rho;
        valid = true;
        break;
      }
    }
    if (!valid) {
      std::ostringstream msg;
      msg << "rho = " << zeta << " does not give integral band sizes for "
          << profile.num_rbs << " RBs";
      throw ConfigError(msg.str());
    }
    part.zeta = zeta;
    part.n_center_rbs = zeta * n;
    part.n_edge_rbs = (n - part.n_center_rbs) / 3.0;
    double p = profile.total_power_w /
               (profile.subcarriers_per_rb * (part.n_center_rbs + part.n_edge_rbs));
    part.power_center_w = p;
    part.power_edge_w = p;
  } else {
    if (!(zeta >= 0.0 && zeta <= 1.0)) {
      throw ConfigError("beta must lie in [0, 1]");
    }
    part.n_center_rbs = 2.0 * n / 3.0;
    part.n_edge_rbs = n / 3.0;
    part.power_edge_w =
        profile.total_power_w /
        (profile.subcarriers_per_rb * (zeta * part.n_center_rbs + part.n_edge_rbs));
    part.power_center_w = zeta * part.power_edge_w;
  }
  return part;
}

}  // namespace frplan
