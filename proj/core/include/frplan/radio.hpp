#pragma once

#include <vector>

#include "frplan/geometry.hpp"

namespace frplan {

// Log-distance pathloss, offset_db + slope_db * log10(d meters) in dB.
struct PathlossModel {
  double offset_db = 15.3;
  double slope_db = 37.6;

  double db(double d) const;
  double gain(double d) const;  // linear, excludes antenna gain
};

// Downlink system parameters for a macro OFDMA deployment.
struct NetworkProfile {
  double total_power_w = 39.810717055349734;  // 46 dBm
  double antenna_gain_db = 14.0;
  double noise_psd_w_hz = 3.9810717055349695e-21;  // -174 dBm/Hz
  double noise_figure_db = 7.0;
  double subcarrier_spacing_hz = 15e3;
  int subcarriers_per_rb = 12;
  double rb_bandwidth_hz = 180e3;
  int num_rbs = 100;
  double user_density = 0.0;  // users per square meter
  PathlossModel pathloss;

  double antenna_gain_lin() const;
  // Thermal noise per subcarrier including the receiver noise figure.
  double noise_power_w() const;
  // Serving/interfering link gain: antenna gain times pathloss gain.
  double link_gain(double d) const;
  // Mean number of users in the cell disc annulus.
  double mean_users(const CellGeometry& geom) const;

  void validate() const;
};

// Per-subcarrier transmit powers and analytic band sizes for a reuse scheme
// at a given split parameter (rho for FFR, beta for SFR). Band sizes are kept
// real-valued; the event-level simulator quantizes separately.
struct SpectrumPartition {
  Scheme scheme = Scheme::ffr;
  double zeta = 0.0;
  double n_center_rbs = 0.0;
  double n_edge_rbs = 0.0;  // per edge band
  double power_center_w = 0.0;
  double power_edge_w = 0.0;

  double power(PowerClass c) const {
    return c == PowerClass::center ? power_center_w : power_edge_w;
  }
  double n_rbs(Region a) const {
    return a == Region::center ? n_center_rbs : n_edge_rbs;
  }
};

// FFR center fractions rho = (num_rbs - 3 * n_edge) / num_rbs that yield an
// integral per-band RB count, ascending.
std::vector<double> valid_rho_set(int num_rbs);

SpectrumPartition make_partition(const NetworkProfile& profile, Scheme scheme,
                                 double zeta);

}  // namespace frplan
