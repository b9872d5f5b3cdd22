#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/quadrature.hpp"
#include "frplan/radio.hpp"
#include "frplan/sinr.hpp"

namespace frplan {

struct ModelOptions {
  AnglePolicy policy{};
  // Conditional-CDF tensor: master nodes span the whole cell annulus so one
  // table can serve every region split; narrow regions are topped up with
  // directly evaluated nodes.
  int master_d_nodes = 96;
  int min_region_d_nodes = 24;
  double poisson_tail = 1e-8;
  int kmax_cap = 512;
  double quad_abs = 1e-12;
  double quad_rel = 1e-7;
  int max_panels = 64;
  int cdf_grid_points = 200;

  void validate() const;
};

// Angle-averaged conditional SINR survival tensor for one band interference
// field, sampled on frozen quadrature abscissae and log-spaced distances over
// [d_min, d_max]. Stores the interference-only product so that views with a
// different serving power (same power ratios) can reapply the noise factor.
class BandCdfTable {
 public:
  BandCdfTable(const BandLinkModel& band, const AnglePolicy& policy,
               double d_min, double d_max, int n_d, int k_hi,
               const ModelOptions& opts);

  bool compatible_with(const BandLinkModel& band, const AnglePolicy& policy,
                       double d_min, double d_max, int n_d, int k_hi) const;

  const PanelGrid& grid() const { return grid_; }
  const std::vector<double>& d_nodes() const { return d_; }
  // Mean over azimuth of the interference survival product at node i; the
  // full survival is exp(-x * n0_base / serving_power) times this row.
  const double* interference_row(std::size_t i) const {
    return interference_.data() + i * grid_.x.size();
  }
  double n0_base(std::size_t i) const { return n0_base_[i]; }
  std::vector<double> interference_row_at(double d) const;
  double n0_base_at(double d) const;

 private:
  BandLinkModel band_;
  AnglePolicy policy_;
  std::vector<double> angles_;
  double d_min_ = 0.0, d_max_ = 0.0;
  int n_d_ = 0;
  int k_hi_ = 0;
  PanelGrid grid_;
  std::vector<double> d_;
  std::vector<double> n0_base_;
  std::vector<double> interference_;  // row-major [d][x]
};

// Shares BandCdfTable instances between models whose bands have identical
// interference-ratio structure (all FFR power splits, repeated SFR betas).
class MasterTableCache {
 public:
  std::shared_ptr<const BandCdfTable> get_or_build(
      const BandLinkModel& band, const AnglePolicy& policy, double d_min,
      double d_max, int n_d, int k_hi, const ModelOptions& opts);

  std::size_t size() const { return tables_.size(); }

 private:
  std::vector<std::shared_ptr<const BandCdfTable>> tables_;
};

enum class RateForm { pdf_form, survival_form };

// Proportional-fair rate statistics of one cell region: per-RB rates under
// k-user contention, their inversion in distance, the region's share of the
// user-throughput CDF, and the region's average carried throughput.
class PfRegionModel {
 public:
  struct Inputs {
    Region region = Region::center;
    double r_lo = 0.0;
    double r_hi = 0.0;
    double n_rbs = 0.0;           // N_A
    double p_region = 0.0;        // P_A
    double mean_cell_users = 0.0; // M
    double rb_bandwidth_hz = 0.0;
  };

  PfRegionModel(std::shared_ptr<const BandCdfTable> master, BandLinkModel band,
                const Inputs& in, const ModelOptions& opts);

  Region region() const { return in_.region; }
  double r_lo() const { return in_.r_lo; }
  double r_hi() const { return in_.r_hi; }
  double n_rbs() const { return in_.n_rbs; }
  double p_region() const { return in_.p_region; }
  double mean_region_users() const { return in_.mean_cell_users * in_.p_region; }
  int k_max() const { return k_max_; }
  // True when the region has positive user mass but its users cannot be
  // served (no spectrum or zero serving power): all rate mass sits at zero.
  bool zero_rate() const { return zero_rate_; }
  // True when the region has no user mass (zero width).
  bool empty() const { return empty_; }

  // Per-RB PF rate under k-user contention at distance d (cached tensor).
  double pf_rb_rate(int k, double d) const;
  // Same quantity by direct adaptive quadrature of either integral form.
  double pf_rb_rate_direct(int k, double d, RateForm form) const;
  // N_A-scaled rate at distance d and its region average over the distance
  // density 2d/(r_hi^2 - r_lo^2).
  double region_rate(int k, double d) const;
  double user_region_rate(int k) const;
  // Distance at which the region rate equals v, clamped to [r_lo, r_hi].
  double invert_rate_to_distance(int k, double v) const;
  // P{region rate <= v} for a user placed by the distance density.
  double pr_rate_below(int k, double v) const;
  // Weight of the k-user term in the user-throughput CDF and its total.
  double cdf_coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
  double cdf_mass() const { return mass_; }
  // Region contribution to the user-throughput CDF.
  double region_cdf(double v) const;
  // Average carried throughput of the region: exponential-mixture integral
  // form and the truncated coefficient-sum form (cross-check pair).
  double avg_throughput() const;
  double avg_throughput_sum() const;
  // Raw rate-moment averages E[rate^m * 1{user in region}] used for fairness.
  double rate_moment(int m) const;
  // Attainable region rate interval [min over k<=k_max, max].
  double min_positive_rate() const { return min_rate_; }
  double max_rate() const { return max_rate_; }

 private:
  double rate_row_interp(int k, double d) const;
  double invert_on_row(int k, double v) const;
  void build_rows();
  void build_coeffs();

  std::shared_ptr<const BandCdfTable> master_;
  BandLinkModel band_;
  Inputs in_;
  ModelOptions opts_;
  bool zero_rate_ = false;
  bool empty_ = false;
  int k_max_ = 0;
  std::vector<double> nodes_;     // region distance nodes, ascending
  std::vector<double> u_;         // log nodes
  std::vector<double> survival_;  // [node][x]
  std::vector<double> scol_slopes_;  // pchip slopes of survival columns in u
  std::vector<std::vector<double>> rows_;        // per-RB rate rows [k][node]
  std::vector<std::vector<double>> row_slopes_;  // pchip slopes in u
  std::vector<double> c_, b_;  // CDF and throughput coefficients
  double mass_ = 0.0;
  double min_rate_ = 0.0, max_rate_ = 0.0;
};

struct PlateauInfo {
  double level = 0.0;
  double v_lo = 0.0;
  double v_hi = 0.0;
};

struct ThroughputCdf {
  std::vector<double> v;
  std::vector<double> f;
  double mass = 0.0;
  std::optional<PlateauInfo> plateau;
};

// Full-cell analytic model at one (omega, zeta) design point.
class CellThroughputModel {
 public:
  CellThroughputModel(const NetworkProfile& profile, const CellGeometry& geom,
                      const BsLayout& layout, Scheme scheme, double omega,
                      double zeta, const ModelOptions& opts = {},
                      MasterTableCache* cache = nullptr);

  const PfRegionModel& region(Region a) const {
    return a == Region::center ? *center_ : *edge_;
  }
  Scheme scheme() const { return scheme_; }
  double omega() const { return omega_; }
  double zeta() const { return zeta_; }
  double mean_cell_users() const { return mean_users_; }
  const RegionPartition& partition() const { return region_partition_; }
  const SpectrumPartition& spectrum() const { return spectrum_; }

  // User-throughput CDF (raw: saturates at 1 - exp(-mean users)).
  double user_cdf(double v) const;
  double total_cdf_mass() const;
  // inf{v : F(v) >= x}; plateaus resolved by the infimum convention.
  double percentile(double x) const;
  // Average cell throughput: integral route and coefficient-sum route.
  double avg_cell_throughput() const;
  double avg_cell_throughput_sum() const;
  // Average per-user throughput in a region, empty for a zero-mass region.
  std::optional<double> per_user_region_throughput(Region a) const;
  // Jain fairness index of the user-throughput distribution.
  double jain_index() const;
  // Sampled CDF on a log grid with plateau metadata.
  ThroughputCdf sampled_cdf() const;

 private:
  Scheme scheme_;
  double omega_ = 0.0, zeta_ = 0.0;
  double mean_users_ = 0.0;
  RegionPartition region_partition_;
  SpectrumPartition spectrum_;
  ModelOptions opts_;
  std::shared_ptr<PfRegionModel> center_, edge_;
};

}  // namespace frplan
