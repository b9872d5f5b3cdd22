#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/radio.hpp"
#include "frplan/rng.hpp"

namespace frplan {

// Monte Carlo system-level counterpart of the analytical model: Poisson user
// drops, per-slot Rayleigh fading, and proportional-fair scheduling on the
// tagged cell, with neighbor cells transmitting at full load.
struct SimConfig {
  NetworkProfile profile;
  CellGeometry geom;
  Scheme scheme = Scheme::ffr;
  double omega = 1.0;
  double zeta = 1.0;
  int slots = 50000;   // scheduling periods per drop
  int drops = 40;
  int window = 100;    // PF moving-average window W
  int warmup = -1;     // slots excluded from statistics; -1 = max(5W, 500)
  std::uint64_t seed = 0;
  int threads = 0;     // 0 = default worker count

  int resolved_warmup() const;
  void validate() const;
};

struct SimUser {
  double d = 0.0;
  double theta = 0.0;
  Region region = Region::center;
  double total_bits = 0.0;     // bit-slots accumulated after warmup
  double mean_rate_bps = 0.0;  // total_bits / counted slots
  double mu_cv = 0.0;          // coefficient of variation of the PF weight
  std::int64_t slots_scheduled = 0;
};

// One active resource block of the tagged cell. color < 0 marks the reuse-1
// center band; otherwise the reuse-3 color of the band the RB belongs to.
struct SimRb {
  Region region = Region::center;
  int color = -1;
};

struct DropResult {
  std::vector<SimUser> users;
  std::vector<SimRb> rb_bands;
  std::vector<std::int64_t> rb_slots;  // scheduled slot count per active RB
  double cell_throughput_bps = 0.0;
  int counted_slots = 0;
};

struct SimSummary {
  std::vector<double> pooled_rates_bps;  // sorted ascending, all drops pooled
  double mean_cell_throughput_bps = 0.0;
  double r5_bps = 0.0;  // 5th-percentile order statistic of pooled rates
  double jain = 0.0;
  std::size_t total_users = 0;
  int empty_drops = 0;

  // Empirical CDF of the pooled per-user rates.
  double ecdf(double v) const;
};

// Integer RB layout of the tagged cell: under FFR the reuse-1 center block
// followed by the cell's reuse-3 edge band; under SFR the cell's edge band
// (floor(N/3) RBs) followed by the two center bands (ceil/floor of the rest).
std::vector<SimRb> active_rb_layout(const NetworkProfile& profile, Scheme scheme,
                                    double zeta);

// Poisson(lambda * cell area) users, uniform on the serving annulus, tagged
// center/edge by the region threshold of omega.
std::vector<SimUser> drop_users(const NetworkProfile& profile,
                                const CellGeometry& geom, double omega,
                                Rng& rng);

// Simulate one drop: per slot and RB, every in-region user draws an i.i.d.
// faded SINR; the PF scheduler picks argmax gamma/mu and awards
// B_RB log2(1+gamma) bit-slots; mu follows the W-slot moving average.
DropResult run_drop(const SimConfig& config, std::vector<SimUser> users,
                    Rng& rng);

// All drops with per-drop derived RNG streams; result is independent of the
// worker count.
std::vector<DropResult> simulate(const SimConfig& config);

// Pool drops into the empirical user-rate CDF and summary metrics.
SimSummary aggregate(std::span<const DropResult> drops);

}  // namespace frplan
