#pragma once

#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/radio.hpp"
#include "frplan/rng.hpp"

namespace frplan {

// Mean received power levels (per subcarrier, fading averaged out) that fix
// the SINR distribution of one user on one band: Rayleigh fading on every
// link makes the SINR CDF conditionally exponential over interferer products.
struct SinrContext {
  double serving_power_w = 0.0;
  double noise_power_w = 0.0;
  std::vector<double> interferer_power_w;
};

// P{SINR <= x} for the context; exact under unit-mean exponential link gains.
double sinr_cdf(const SinrContext& ctx, double x);

// Density of the SINR distribution at x.
double sinr_pdf(const SinrContext& ctx, double x);

// One Rayleigh-faded SINR draw. Consumes exactly 1 + #interferers
// exponential deviates (serving link first, then interferers in order).
double sample_sinr(const SinrContext& ctx, Rng& rng);

// Distance-conditioned SINR law: either averaged uniformly over the user
// azimuth or pinned at a fixed azimuth (worst case is theta = 0, toward the
// nearest interferer).
struct AnglePolicy {
  enum class Kind { average, fixed };
  Kind kind = Kind::average;
  int n_theta = 24;    // averaging points per full circle
  double theta = 0.0;  // used by Kind::fixed
};

// Interference field of one band: the serving power, noise, and every
// interfering site with the transmit power it applies on this band.
struct BandLinkModel {
  struct Interferer {
    Vec2 pos;
    double tx_power_w = 0.0;
  };
  double serving_tx_power_w = 0.0;
  double noise_power_w = 0.0;
  double antenna_gain_lin = 1.0;
  PathlossModel pathloss;
  std::vector<Interferer> interferers;
  // Smallest rotation angle mapping the interferer field onto itself; the
  // uniform angular average over [0, 2pi) collapses exactly to this period.
  double angular_period = 0.0;

  SinrContext context_at(double d, double theta) const;
};

BandLinkModel make_band_link_model(const NetworkProfile& profile,
                                   const BsLayout& layout,
                                   const SpectrumPartition& partition,
                                   BandClass band);

// Effective averaging angles for a policy applied to a band with the given
// angular period (grid points fold exactly onto one period).
std::vector<double> policy_angles(const AnglePolicy& policy, double period);

// SINR CDF / pdf at distance d under the angle policy.
double angle_policy_cdf(const BandLinkModel& model, const AnglePolicy& policy,
                        double d, double x);
double angle_policy_pdf(const BandLinkModel& model, const AnglePolicy& policy,
                        double d, double x);

}  // namespace frplan
