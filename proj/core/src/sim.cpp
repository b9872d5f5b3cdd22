#include "frplan/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "frplan/errors.hpp"
#include "frplan/parallel.hpp"
#include "frplan/sinr.hpp"
#include "frplan/stats.hpp"

namespace frplan {
namespace {

// Keeps PF weights strictly positive so that metric = gamma / mu stays finite
// even on bands transmitting at zero power.
constexpr double kMuFloor = 1e-300;

int poisson_draw(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  // Knuth inversion: product of uniforms against exp(-mean). Fine for the
  // loads considered here (mean well below overflow territory).
  double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    p *= rng.uniform();
    ++k;
  } while (p > limit);
  return k - 1;
}

}  // namespace

int SimConfig::resolved_warmup() const {
  return warmup >= 0 ? warmup : std::max(5 * window, 500);
}

void SimConfig::validate() const {
  profile.validate();
  if (window < 1) throw ConfigError("PF window must be at least 1 slot");
  if (drops < 1) throw ConfigError("at least one drop is required");
  int wu = resolved_warmup();
  if (wu < window) {
    throw ConfigError("warmup must cover at least one PF window");
  }
  if (slots <= wu) {
    throw ConfigError("slots per drop must exceed the warmup period");
  }
  (void)make_region_partition(geom, omega);
  (void)make_partition(profile, scheme, zeta);
}

std::vector<SimRb> active_rb_layout(const NetworkProfile& profile, Scheme scheme,
                                    double zeta) {
  SpectrumPartition sp = make_partition(profile, scheme, zeta);
  std::vector<SimRb> rbs;
  if (scheme == Scheme::ffr) {
    int nc = static_cast<int>(std::lround(sp.n_center_rbs));
    int ne = static_cast<int>(std::lround(sp.n_edge_rbs));
    for (int i = 0; i < nc; ++i) rbs.push_back({Region::center, -1});
    for (int i = 0; i < ne; ++i) rbs.push_back({Region::edge, 0});
  } else {
    int n = profile.num_rbs;
    int n0 = n / 3;  // tagged cell's reuse-3 band takes the floor share
    int rest = n - n0;
    int n1 = (rest + 1) / 2;
    int n2 = rest - n1;
    for (int i = 0; i < n0; ++i) rbs.push_back({Region::edge, 0});
    for (int i = 0; i < n1; ++i) rbs.push_back({Region::center, 1});
    for (int i = 0; i < n2; ++i) rbs.push_back({Region::center, 2});
  }
  return rbs;
}

std::vector<SimUser> drop_users(const NetworkProfile& profile,
                                const CellGeometry& geom, double omega,
                                Rng& rng) {
  RegionPartition part = make_region_partition(geom, omega);
  int count = poisson_draw(profile.mean_users(geom), rng);
  std::vector<SimUser> users(static_cast<std::size_t>(count));
  double r0sq = geom.min_dist * geom.min_dist;
  double rmsq = geom.circ_radius * geom.circ_radius;
  for (SimUser& u : users) {
    u.d = std::sqrt(r0sq + rng.uniform() * (rmsq - r0sq));
    u.theta = 2.0 * std::numbers::pi * rng.uniform();
    u.region = u.d < part.r_threshold ? Region::center : Region::edge;
  }
  return users;
}

DropResult run_drop(const SimConfig& config, std::vector<SimUser> users,
                    Rng& rng) {
  config.validate();
  const NetworkProfile& p = config.profile;
  const BsLayout layout = build_layout(config.geom.hex_side, 2);
  std::vector<SimRb> rbs = active_rb_layout(p, config.scheme, config.zeta);

  // Distinct band kinds among the active RBs and the field model of each.
  std::vector<SimRb> kinds;
  std::vector<int> rb_kind(rbs.size(), 0);
  for (std::size_t i = 0; i < rbs.size(); ++i) {
    int found = -1;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      if (kinds[k].region == rbs[i].region && kinds[k].color == rbs[i].color) {
        found = static_cast<int>(k);
        break;
      }
    }
    if (found < 0) {
      kinds.push_back(rbs[i]);
      found = static_cast<int>(kinds.size()) - 1;
    }
    rb_kind[i] = found;
  }
  const SpectrumPartition sp = make_partition(p, config.scheme, config.zeta);
  std::vector<BandLinkModel> models;
  models.reserve(kinds.size());
  for (const SimRb& kind : kinds) {
    BandClass bc = kind.color < 0 ? ffr_center_band()
                   : config.scheme == Scheme::ffr ? ffr_edge_band(kind.color)
                                                  : sfr_band(kind.color);
    models.push_back(make_band_link_model(p, layout, sp, bc));
  }

  const std::size_t nu = users.size();
  std::array<std::vector<int>, 2> region_users;
  for (std::size_t u = 0; u < nu; ++u) {
    region_users[static_cast<int>(users[u].region)].push_back(
        static_cast<int>(u));
  }
  std::vector<SinrContext> ctx(nu * kinds.size());
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      if (kinds[k].region != users[u].region) continue;
      ctx[u * kinds.size() + k] = models[k].context_at(users[u].d, users[u].theta);
    }
  }

  const int T = config.slots;
  const int warmup = config.resolved_warmup();
  const int W = config.window;
  const double decay = 1.0 - 1.0 / W;

  std::vector<double> mu(nu, kMuFloor);
  std::vector<double> sched_gamma(nu, 0.0);
  std::vector<double> bits(nu, 0.0);
  std::vector<std::int64_t> rb_slots(rbs.size(), 0);
  std::vector<std::int64_t> user_slots(nu, 0);
  std::vector<double> mu_mean(nu, 0.0), mu_m2(nu, 0.0);
  std::int64_t mu_samples = 0;

  // Initialization slot: every user's PF weight starts at the empirical mean
  // of its first-slot SINRs across its region's RBs.
  if (nu > 0) {
    std::vector<double> acc(nu, 0.0);
    std::vector<int> cnt(nu, 0);
    for (std::size_t i = 0; i < rbs.size(); ++i) {
      const auto& elig = region_users[static_cast<int>(rbs[i].region)];
      for (int u : elig) {
        acc[static_cast<std::size_t>(u)] +=
            sample_sinr(ctx[static_cast<std::size_t>(u) * kinds.size() +
                            static_cast<std::size_t>(rb_kind[i])],
                        rng);
        ++cnt[static_cast<std::size_t>(u)];
      }
    }
    for (std::size_t u = 0; u < nu; ++u) {
      if (cnt[u] > 0) mu[u] = std::max(acc[u] / cnt[u], kMuFloor);
    }
  }

  for (int t = 1; t < T; ++t) {
    const bool counted = t >= warmup;
    for (std::size_t i = 0; i < rbs.size(); ++i) {
      const auto& elig = region_users[static_cast<int>(rbs[i].region)];
      if (elig.empty()) continue;
      const std::size_t kind = static_cast<std::size_t>(rb_kind[i]);
      int best = -1;
      double best_metric = -1.0;
      double best_gamma = 0.0;
      for (int u : elig) {
        double g = sample_sinr(ctx[static_cast<std::size_t>(u) * kinds.size() + kind], rng);
        double metric = g / mu[static_cast<std::size_t>(u)];
        if (metric > best_metric) {
          best_metric = metric;
          best = u;
          best_gamma = g;
        }
      }
      sched_gamma[static_cast<std::size_t>(best)] += best_gamma;
      if (counted) {
        bits[static_cast<std::size_t>(best)] +=
            p.rb_bandwidth_hz * std::log2(1.0 + best_gamma);
        ++rb_slots[i];
        ++user_slots[static_cast<std::size_t>(best)];
      }
    }
    for (std::size_t u = 0; u < nu; ++u) {
      mu[u] = std::max(decay * mu[u] + sched_gamma[u] / W, kMuFloor);
      sched_gamma[u] = 0.0;
    }
    if (counted) {
      ++mu_samples;
      for (std::size_t u = 0; u < nu; ++u) {
        double delta = mu[u] - mu_mean[u];
        mu_mean[u] += delta / static_cast<double>(mu_samples);
        mu_m2[u] += delta * (mu[u] - mu_mean[u]);
      }
    }
  }

  DropResult out;
  out.rb_bands = std::move(rbs);
  out.rb_slots = std::move(rb_slots);
  out.counted_slots = T - warmup;
  for (std::size_t u = 0; u < nu; ++u) {
    SimUser su = users[u];
    su.total_bits = bits[u];
    su.mean_rate_bps = bits[u] / out.counted_slots;
    su.slots_scheduled = user_slots[u];
    if (mu_samples > 1 && mu_mean[u] > kMuFloor) {
      double var = mu_m2[u] / static_cast<double>(mu_samples);
      su.mu_cv = std::sqrt(var) / mu_mean[u];
    }
    out.cell_throughput_bps += su.mean_rate_bps;
    out.users.push_back(su);
  }
  return out;
}

std::vector<DropResult> simulate(const SimConfig& config) {
  config.validate();
  std::vector<DropResult> out(static_cast<std::size_t>(config.drops));
  int workers = config.threads > 0 ? config.threads : default_thread_count();
  parallel_for(static_cast<std::size_t>(config.drops), workers,
               [&](std::size_t i) {
                 Rng rng(derive_seed(config.seed, i));
                 std::vector<SimUser> users =
                     drop_users(config.profile, config.geom, config.omega, rng);
                 out[i] = run_drop(config, std::move(users), rng);
               });
  return out;
}

double SimSummary::ecdf(double v) const {
  if (pooled_rates_bps.empty()) return 0.0;
  auto it = std::upper_bound(pooled_rates_bps.begin(), pooled_rates_bps.end(), v);
  return static_cast<double>(it - pooled_rates_bps.begin()) /
         static_cast<double>(pooled_rates_bps.size());
}

SimSummary aggregate(std::span<const DropResult> drops) {
  if (drops.empty()) throw ConfigError("aggregate needs at least one drop");
  SimSummary s;
  double cell_sum = 0.0;
  for (const DropResult& d : drops) {
    cell_sum += d.cell_throughput_bps;
    if (d.users.empty()) {
      ++s.empty_drops;
      continue;
    }
    for (const SimUser& u : d.users) s.pooled_rates_bps.push_back(u.mean_rate_bps);
  }
  if (s.pooled_rates_bps.empty()) {
    throw NumericalError("every simulated drop was empty");
  }
  std::sort(s.pooled_rates_bps.begin(), s.pooled_rates_bps.end());
  s.total_users = s.pooled_rates_bps.size();
  s.mean_cell_throughput_bps = cell_sum / static_cast<double>(drops.size());
  std::size_t idx = static_cast<std::size_t>(
      std::ceil(0.05 * static_cast<double>(s.total_users)));
  s.r5_bps = s.pooled_rates_bps[std::max<std::size_t>(idx, 1) - 1];
  s.jain = jain_index(s.pooled_rates_bps);
  return s;
}

}  // namespace frplan
