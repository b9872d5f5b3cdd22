#include "frplan/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frplan/errors.hpp"

namespace frplan {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Survival function P{SINR > x}; the log-domain product keeps long interferer
// products stable for large x.
double sinr_survival(const SinrContext& ctx, double x) {
  if (x < 0.0) return 1.0;
  if (!(ctx.serving_power_w > 0.0)) return 0.0;
  double log_s = -x * ctx.noise_power_w / ctx.serving_power_w;
  for (double p : ctx.interferer_power_w) {
    log_s -= std::log1p(x * p / ctx.serving_power_w);
  }
  return std::exp(log_s);
}

bool rotation_invariant(const std::vector<BandLinkModel::Interferer>& field,
                        double angle, double pos_tol) {
  double c = std::cos(angle);
  double s = std::sin(angle);
  for (const auto& e : field) {
    Vec2 r{c * e.pos.x - s * e.pos.y, s * e.pos.x + c * e.pos.y};
    bool found = false;
    for (const auto& o : field) {
      if (std::abs(o.pos.x - r.x) < pos_tol && std::abs(o.pos.y - r.y) < pos_tol &&
          std::abs(o.tx_power_w - e.tx_power_w) <=
              1e-12 * std::max(o.tx_power_w, e.tx_power_w)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

double detect_angular_period(const std::vector<BandLinkModel::Interferer>& field,
                             double pos_tol) {
  if (field.empty()) return kTwoPi;
  for (int divisor : {6, 3, 2}) {
    if (rotation_invariant(field, kTwoPi / divisor, pos_tol)) {
      return kTwoPi / divisor;
    }
  }
  return kTwoPi;
}

}  // namespace

double sinr_cdf(const SinrContext& ctx, double x) {
  return 1.0 - sinr_survival(ctx, x);
}

double sinr_pdf(const SinrContext& ctx, double x) {
  if (x < 0.0 || !(ctx.serving_power_w > 0.0)) return 0.0;
  double rate = ctx.noise_power_w / ctx.serving_power_w;
  for (double p : ctx.interferer_power_w) {
    double a = p / ctx.serving_power_w;
    rate += a / (1.0 + x * a);
  }
  return sinr_survival(ctx, x) * rate;
}

double sample_sinr(const SinrContext& ctx, Rng& rng) {
  double signal = ctx.serving_power_w * rng.exponential();
  double denom = ctx.noise_power_w;
  for (double p : ctx.interferer_power_w) {
    denom += p * rng.exponential();
  }
  return signal / denom;
}

SinrContext BandLinkModel::context_at(double d, double theta) const {
  SinrContext ctx;
  ctx.serving_power_w =
      serving_tx_power_w * antenna_gain_lin * pathloss.gain(d);
  ctx.noise_power_w = noise_power_w;
  ctx.interferer_power_w.reserve(interferers.size());
  for (const auto& e : interferers) {
    double dist = interferer_distance(d, theta, e.pos);
    ctx.interferer_power_w.push_back(e.tx_power_w * antenna_gain_lin *
                                     pathloss.gain(dist));
  }
  return ctx;
}

BandLinkModel make_band_link_model(const NetworkProfile& profile,
                                   const BsLayout& layout,
                                   const SpectrumPartition& partition,
                                   BandClass band) {
  if (band.scheme != partition.scheme) {
    throw ConfigError("band class does not match the spectrum partition scheme");
  }
  BandLinkModel model;
  model.serving_tx_power_w = partition.power(serving_power_class(layout, band));
  model.noise_power_w = profile.noise_power_w();
  model.antenna_gain_lin = profile.antenna_gain_lin();
  model.pathloss = profile.pathloss;
  for (const BandInterferer& entry : interferer_sets(layout, band)) {
    model.interferers.push_back(
        {layout.sites[entry.site].pos, partition.power(entry.power)});
  }
  model.angular_period =
      detect_angular_period(model.interferers, 1e-9 * layout.spacing);
  return model;
}

std::vector<double> policy_angles(const AnglePolicy& policy, double period) {
  if (policy.kind == AnglePolicy::Kind::fixed) {
    return {policy.theta};
  }
  if (policy.n_theta < 1) throw ConfigError("angle average needs n_theta >= 1");
  if (!(period > 0.0)) period = kTwoPi;
  int n = std::max(1, static_cast<int>(std::lround(policy.n_theta * period / kTwoPi)));
  std::vector<double> angles(n);
  for (int j = 0; j < n; ++j) angles[j] = period * j / n;
  return angles;
}

double angle_policy_cdf(const BandLinkModel& model, const AnglePolicy& policy,
                        double d, double x) {
  std::vector<double> angles = policy_angles(policy, model.angular_period);
  double acc = 0.0;
  for (double theta : angles) {
    acc += sinr_cdf(model.context_at(d, theta), x);
  }
  return acc / static_cast<double>(angles.size());
}

double angle_policy_pdf(const BandLinkModel& model, const AnglePolicy& policy,
                        double d, double x) {
  std::vector<double> angles = policy_angles(policy, model.angular_period);
  double acc = 0.0;
  for (double theta : angles) {
    acc += sinr_pdf(model.context_at(d, theta), x);
  }
  return acc / static_cast<double>(angles.size());
}

}  // namespace frplan
