#include "frplan/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "frplan/errors.hpp"
#include "frplan/interp.hpp"
#include "frplan/stats.hpp"

namespace frplan {
namespace {

constexpr double kLog2e = std::numbers::log2e;

bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  double ulo = std::log(lo);
  double uhi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out[static_cast<std::size_t>(i)] = std::exp(ulo + t * (uhi - ulo));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace

void ModelOptions::validate() const {
  if (master_d_nodes < 8) throw ConfigError("master_d_nodes must be at least 8");
  if (min_region_d_nodes < 4) throw ConfigError("min_region_d_nodes must be at least 4");
  if (!(poisson_tail > 0.0 && poisson_tail < 1.0)) throw ConfigError("poisson_tail must be in (0, 1)");
  if (kmax_cap < 1) throw ConfigError("kmax_cap must be at least 1");
  if (!(quad_abs > 0.0) || !(quad_rel > 0.0)) throw ConfigError("quadrature tolerances must be positive");
  if (max_panels < 8) throw ConfigError("max_panels must be at least 8");
  if (cdf_grid_points < 16) throw ConfigError("cdf_grid_points must be at least 16");
}

// ---------------------------------------------------------------------------
// BandCdfTable

BandCdfTable::BandCdfTable(const BandLinkModel& band, const AnglePolicy& policy,
                           double d_min, double d_max, int n_d, int k_hi,
                           const ModelOptions& opts)
    : band_(band),
      policy_(policy),
      angles_(policy_angles(policy, band.angular_period)),
      d_min_(d_min),
      d_max_(d_max),
      n_d_(n_d),
      k_hi_(std::max(1, k_hi)) {
  if (!(band.serving_tx_power_w > 0.0)) {
    throw ConfigError("conditional CDF table needs a positive serving power");
  }
  if (!(d_min > 0.0 && d_max > d_min)) {
    throw ConfigError("invalid distance range for conditional CDF table");
  }

  // Direct angle-averaged CDF used for probing the quadrature grid; the
  // power_scale variant covers views with a lower serving power (heavier
  // noise term) sharing this table.
  auto direct_cdf = [this](double d, double x, double power_scale) {
    double n0 = n0_base_at(d) / (band_.serving_tx_power_w * power_scale);
    double acc = 0.0;
    for (double theta : angles_) {
      double log_s = -x * n0;
      double serving_gain = band_.pathloss.gain(d);
      for (const auto& e : band_.interferers) {
        double dist = interferer_distance(d, theta, e.pos);
        double a = e.tx_power_w * band_.pathloss.gain(dist) /
                   (band_.serving_tx_power_w * serving_gain);
        log_s -= std::log1p(x * a);
      }
      acc += std::exp(log_s);
    }
    return 1.0 - acc / static_cast<double>(angles_.size());
  };

  const double d_mid = std::sqrt(d_min * d_max);
  const double mu_hi = static_cast<double>(k_hi_);
  std::vector<std::function<double(double)>> probes;
  for (double d : {d_min, d_mid, d_max}) {
    probes.emplace_back([direct_cdf, d](double x) {
      return (1.0 - direct_cdf(d, x, 1.0)) / (1.0 + x);
    });
    probes.emplace_back([direct_cdf, d, this](double x) {
      return (1.0 - std::pow(direct_cdf(d, x, 1.0), k_hi_)) / (1.0 + x);
    });
  }
  probes.emplace_back([direct_cdf, d_max](double x) {
    return (1.0 - direct_cdf(d_max, x, 0.2)) / (1.0 + x);
  });
  probes.emplace_back([direct_cdf, d_mid, mu_hi](double x) {
    return -std::expm1(-mu_hi * (1.0 - direct_cdf(d_mid, x, 1.0))) / (1.0 + x);
  });
  grid_ = freeze_semi_infinite_grid(probes, opts.quad_abs, opts.quad_rel,
                                    opts.max_panels);

  d_ = log_spaced(d_min, d_max, n_d);
  n0_base_.resize(d_.size());
  interference_.resize(d_.size() * grid_.x.size());
  for (std::size_t i = 0; i < d_.size(); ++i) {
    n0_base_[i] = n0_base_at(d_[i]);
    std::vector<double> row = interference_row_at(d_[i]);
    std::copy(row.begin(), row.end(),
              interference_.begin() + static_cast<std::ptrdiff_t>(i * grid_.x.size()));
  }
}

double BandCdfTable::n0_base_at(double d) const {
  return band_.noise_power_w / (band_.antenna_gain_lin * band_.pathloss.gain(d));
}

std::vector<double> BandCdfTable::interference_row_at(double d) const {
  const std::size_t nx = grid_.x.size();
  std::vector<double> acc(nx, 0.0);
  std::vector<double> a(band_.interferers.size());
  double serving = band_.serving_tx_power_w * band_.pathloss.gain(d);
  for (double theta : angles_) {
    for (std::size_t t = 0; t < band_.interferers.size(); ++t) {
      const auto& e = band_.interferers[t];
      double dist = interferer_distance(d, theta, e.pos);
      a[t] = e.tx_power_w * band_.pathloss.gain(dist) / serving;
    }
    for (std::size_t j = 0; j < nx; ++j) {
      double log_s = 0.0;
      for (double ai : a) log_s -= std::log1p(grid_.x[j] * ai);
      acc[j] += std::exp(log_s);
    }
  }
  double inv = 1.0 / static_cast<double>(angles_.size());
  for (double& v : acc) v *= inv;
  return acc;
}

bool BandCdfTable::compatible_with(const BandLinkModel& band,
                                   const AnglePolicy& policy, double d_min,
                                   double d_max, int n_d, int k_hi) const {
  if (policy.kind != policy_.kind || policy.n_theta != policy_.n_theta ||
      policy.theta != policy_.theta) {
    return false;
  }
  if (n_d != n_d_ || k_hi != k_hi_) return false;
  if (!nearly_equal(d_min, d_min_, 1e-12) || !nearly_equal(d_max, d_max_, 1e-12)) {
    return false;
  }
  if (!nearly_equal(band.noise_power_w, band_.noise_power_w, 1e-12)) return false;
  if (!nearly_equal(band.antenna_gain_lin, band_.antenna_gain_lin, 1e-12)) return false;
  if (band.pathloss.offset_db != band_.pathloss.offset_db ||
      band.pathloss.slope_db != band_.pathloss.slope_db) {
    return false;
  }
  if (band.interferers.size() != band_.interferers.size()) return false;
  if (!(band.serving_tx_power_w > 0.0)) return false;
  for (std::size_t i = 0; i < band_.interferers.size(); ++i) {
    const auto& a = band.interferers[i];
    const auto& b = band_.interferers[i];
    if (std::abs(a.pos.x - b.pos.x) > 1e-9 || std::abs(a.pos.y - b.pos.y) > 1e-9) {
      return false;
    }
    double ra = a.tx_power_w / band.serving_tx_power_w;
    double rb = b.tx_power_w / band_.serving_tx_power_w;
    if (!nearly_equal(ra, rb, 1e-12)) return false;
  }
  return true;
}

std::shared_ptr<const BandCdfTable> MasterTableCache::get_or_build(
    const BandLinkModel& band, const AnglePolicy& policy, double d_min,
    double d_max, int n_d, int k_hi, const ModelOptions& opts) {
  for (const auto& t : tables_) {
    if (t->compatible_with(band, policy, d_min, d_max, n_d, k_hi)) return t;
  }
  tables_.push_back(std::make_shared<const BandCdfTable>(
      band, policy, d_min, d_max, n_d, k_hi, opts));
  return tables_.back();
}

// ---------------------------------------------------------------------------
// PfRegionModel

PfRegionModel::PfRegionModel(std::shared_ptr<const BandCdfTable> master,
                             BandLinkModel band, const Inputs& in,
                             const ModelOptions& opts)
    : master_(std::move(master)), band_(std::move(band)), in_(in), opts_(opts) {
  opts_.validate();
  empty_ = !(in_.p_region > 1e-15) || !(in_.mean_cell_users > 0.0);
  zero_rate_ = !empty_ &&
               (!(in_.n_rbs > 0.0) || !(band_.serving_tx_power_w > 0.0));
  k_max_ = poisson_kmax(in_.mean_cell_users, opts_.poisson_tail, opts_.kmax_cap);
  build_coeffs();
  if (empty_ || zero_rate_) return;
  if (!master_) throw std::logic_error("region model needs a CDF table");
  build_rows();
}

void PfRegionModel::build_coeffs() {
  c_.assign(static_cast<std::size_t>(k_max_) + 1, 0.0);
  b_.assign(static_cast<std::size_t>(k_max_) + 1, 0.0);
  mass_ = 0.0;
  if (empty_) return;
  const double m = in_.mean_cell_users;
  for (int ka = 1; ka <= k_max_; ++ka) {
    double c = 0.0, b = 0.0;
    for (int k = ka; k <= k_max_; ++k) {
      double w = poisson_pmf(k, m) * binomial_pmf(ka, k, in_.p_region);
      c += w / k;
      b += w;
    }
    c_[static_cast<std::size_t>(ka)] = c * ka;
    b_[static_cast<std::size_t>(ka)] = b * ka;
    mass_ += c_[static_cast<std::size_t>(ka)];
  }
}

void PfRegionModel::build_rows() {
  const auto& xg = master_->grid();
  const std::size_t nx = xg.x.size();
  const auto& md = master_->d_nodes();

  // Region nodes: master nodes strictly inside the region, exact endpoints,
  // topped up with direct nodes when the region is narrow.
  std::vector<std::size_t> master_idx;  // parallel to nodes_, SIZE_MAX = direct
  nodes_.clear();
  nodes_.push_back(in_.r_lo);
  master_idx.push_back(SIZE_MAX);
  double span = in_.r_hi - in_.r_lo;
  for (std::size_t i = 0; i < md.size(); ++i) {
    if (md[i] > in_.r_lo + 1e-9 * span && md[i] < in_.r_hi - 1e-9 * span) {
      nodes_.push_back(md[i]);
      master_idx.push_back(i);
    }
  }
  nodes_.push_back(in_.r_hi);
  master_idx.push_back(SIZE_MAX);
  if (static_cast<int>(nodes_.size()) < opts_.min_region_d_nodes) {
    std::vector<double> fill =
        log_spaced(in_.r_lo, in_.r_hi, opts_.min_region_d_nodes);
    for (double d : fill) {
      bool dup = false;
      for (double o : nodes_) {
        if (std::abs(o - d) < 1e-9 * span) {
          dup = true;
          break;
        }
      }
      if (!dup) {
        nodes_.push_back(d);
        master_idx.push_back(SIZE_MAX);
      }
    }
    std::vector<std::size_t> order(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
      return nodes_[a] < nodes_[b];
    });
    std::vector<double> sorted_nodes(nodes_.size());
    std::vector<std::size_t> sorted_idx(nodes_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      sorted_nodes[i] = nodes_[order[i]];
      sorted_idx[i] = master_idx[order[i]];
    }
    nodes_ = std::move(sorted_nodes);
    master_idx = std::move(sorted_idx);
  }
  const std::size_t n = nodes_.size();
  u_.resize(n);
  for (std::size_t i = 0; i < n; ++i) u_[i] = std::log(nodes_[i]);

  // Survival tensor: master interference rows scaled by this view's noise
  // factor; off-master nodes evaluated directly.
  const double inv_power = 1.0 / band_.serving_tx_power_w;
  survival_.assign(n * nx, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> direct;
    const double* interf = nullptr;
    double n0b;
    if (master_idx[i] != SIZE_MAX) {
      interf = master_->interference_row(master_idx[i]);
      n0b = master_->n0_base(master_idx[i]);
    } else {
      direct = master_->interference_row_at(nodes_[i]);
      interf = direct.data();
      n0b = master_->n0_base_at(nodes_[i]);
    }
    double* out = survival_.data() + i * nx;
    double rate = n0b * inv_power;
    for (std::size_t j = 0; j < nx; ++j) {
      out[j] = interf[j] * std::exp(-xg.x[j] * rate);
    }
  }

  // Per-RB PF rate rows via incremental powers of F = 1 - S.
  std::vector<double> wp(nx);
  for (std::size_t j = 0; j < nx; ++j) wp[j] = xg.w[j] / (1.0 + xg.x[j]);
  std::vector<double> fk(n * nx, 1.0);
  const double scale = in_.rb_bandwidth_hz * kLog2e;
  rows_.assign(static_cast<std::size_t>(k_max_) + 1, {});
  row_slopes_.assign(static_cast<std::size_t>(k_max_) + 1, {});
  for (int k = 1; k <= k_max_; ++k) {
    auto& row = rows_[static_cast<std::size_t>(k)];
    row.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* s = survival_.data() + i * nx;
      double* p = fk.data() + i * nx;
      double acc = 0.0;
      for (std::size_t j = 0; j < nx; ++j) {
        p[j] *= 1.0 - s[j];
        acc += wp[j] * (1.0 - p[j]);
      }
      row[i] = scale / k * acc;
    }
    // The rate is strictly decreasing in d; remove any rounding dust so the
    // monotone interpolant and inversion stay well-posed.
    for (std::size_t i = 1; i < n; ++i) row[i] = std::min(row[i], row[i - 1]);
    auto& slopes = row_slopes_[static_cast<std::size_t>(k)];
    slopes.resize(n);
    pchip_slopes(u_.data(), n, row.data(), 1, slopes.data(), 1);
  }

  // Survival column interpolants in log-distance for the mixture integral.
  scol_slopes_.assign(n * nx, 0.0);
  for (std::size_t j = 0; j < nx; ++j) {
    pchip_slopes(u_.data(), n, survival_.data() + j, nx, scol_slopes_.data() + j,
                 nx);
  }

  min_rate_ = in_.n_rbs * rows_[static_cast<std::size_t>(k_max_)].back();
  max_rate_ = in_.n_rbs * rows_[1].front();
}

double PfRegionModel::rate_row_interp(int k, double d) const {
  const auto& row = rows_[static_cast<std::size_t>(k)];
  const auto& slopes = row_slopes_[static_cast<std::size_t>(k)];
  double u = std::log(std::clamp(d, nodes_.front(), nodes_.back()));
  auto it = std::upper_bound(u_.begin(), u_.end(), u);
  std::size_t i = it == u_.begin() ? 0 : static_cast<std::size_t>(it - u_.begin()) - 1;
  if (i + 1 >= u_.size()) i = u_.size() - 2;
  return hermite_eval(u_[i], u_[i + 1], row[i], row[i + 1], slopes[i],
                      slopes[i + 1], u);
}

double PfRegionModel::pf_rb_rate(int k, double d) const {
  if (k < 1) throw std::invalid_argument("pf_rb_rate: k must be >= 1");
  if (empty_ || zero_rate_) return 0.0;
  if (k > k_max_) throw std::out_of_range("pf_rb_rate: k beyond Poisson truncation");
  return rate_row_interp(k, d);
}

double PfRegionModel::pf_rb_rate_direct(int k, double d, RateForm form) const {
  if (k < 1) throw std::invalid_argument("pf_rb_rate_direct: k must be >= 1");
  if (empty_ || zero_rate_) return 0.0;
  AnglePolicy policy = opts_.policy;
  const double b = in_.rb_bandwidth_hz;
  if (form == RateForm::survival_form) {
    auto g = [&](double x) {
      double f = angle_policy_cdf(band_, policy, d, x);
      return (1.0 - std::pow(f, k)) / (1.0 + x);
    };
    return b * kLog2e / k *
           integrate_semi_infinite(g, opts_.quad_abs, opts_.quad_rel);
  }
  auto g = [&](double x) {
    double f = angle_policy_cdf(band_, policy, d, x);
    double pdf = angle_policy_pdf(band_, policy, d, x);
    return std::log1p(x) * kLog2e * pdf * std::pow(f, k - 1);
  };
  return b * integrate_semi_infinite(g, opts_.quad_abs, opts_.quad_rel);
}

double PfRegionModel::region_rate(int k, double d) const {
  return in_.n_rbs * pf_rb_rate(k, d);
}

double PfRegionModel::user_region_rate(int k) const {
  if (k < 1) throw std::invalid_argument("user_region_rate: k must be >= 1");
  if (empty_ || zero_rate_) return 0.0;
  if (k > k_max_) throw std::out_of_range("user_region_rate: k beyond Poisson truncation");
  const auto& row = rows_[static_cast<std::size_t>(k)];
  const auto& slopes = row_slopes_[static_cast<std::size_t>(k)];
  const double lo = in_.r_lo, hi = in_.r_hi;
  const double norm = 2.0 / (hi * hi - lo * lo);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    auto f = [&](double y) {
      double u = std::log(y);
      return hermite_eval(u_[i], u_[i + 1], row[i], row[i + 1], slopes[i],
                          slopes[i + 1], u) *
             norm * y;
    };
    total += gauss_kronrod_15(f, nodes_[i], nodes_[i + 1]).value;
  }
  return in_.n_rbs * total;
}

double PfRegionModel::invert_on_row(int k, double v) const {
  // Rate rows are strictly decreasing in d; solve rate(d) = v by bisection in
  // log-distance on the bracketing segment.
  const auto& row = rows_[static_cast<std::size_t>(k)];
  const auto& slopes = row_slopes_[static_cast<std::size_t>(k)];
  double rb = v / in_.n_rbs;
  if (rb >= row.front()) return nodes_.front();
  if (rb <= row.back()) return nodes_.back();
  std::size_t lo = 0, hi = nodes_.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (row[mid] >= rb) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double ulo = u_[lo], uhi = u_[hi];
  auto value = [&](double u) {
    return hermite_eval(u_[lo], u_[hi], row[lo], row[hi], slopes[lo],
                        slopes[hi], u);
  };
  for (int it = 0; it < 64 && uhi - ulo > 1e-12; ++it) {
    double um = 0.5 * (ulo + uhi);
    if (value(um) >= rb) {
      ulo = um;
    } else {
      uhi = um;
    }
  }
  return std::exp(0.5 * (ulo + uhi));
}

double PfRegionModel::invert_rate_to_distance(int k, double v) const {
  if (k < 1) throw std::invalid_argument("invert_rate_to_distance: k must be >= 1");
  if (empty_) return in_.r_lo;
  if (zero_rate_) return in_.r_lo;  // every distance is "at or below" v >= 0
  if (k > k_max_) throw std::out_of_range("invert_rate_to_distance: k beyond Poisson truncation");
  return invert_on_row(k, v);
}

double PfRegionModel::pr_rate_below(int k, double v) const {
  if (empty_) return 0.0;
  if (v < 0.0) return 0.0;
  if (zero_rate_) return 1.0;
  double d = invert_on_row(k, v);
  const double lo = in_.r_lo, hi = in_.r_hi;
  double p = (hi * hi - d * d) / (hi * hi - lo * lo);
  return std::clamp(p, 0.0, 1.0);
}

double PfRegionModel::region_cdf(double v) const {
  if (empty_ || v < 0.0) return 0.0;
  if (zero_rate_) return mass_;
  double acc = 0.0;
  for (int k = 1; k <= k_max_; ++k) {
    double c = c_[static_cast<std::size_t>(k)];
    if (c == 0.0) continue;
    acc += c * pr_rate_below(k, v);
  }
  return acc;
}

double PfRegionModel::avg_throughput() const {
  if (empty_ || zero_rate_) return 0.0;
  const auto& xg = master_->grid();
  const std::size_t nx = xg.x.size();
  std::vector<double> wp(nx);
  for (std::size_t j = 0; j < nx; ++j) wp[j] = xg.w[j] / (1.0 + xg.x[j]);
  const double mu = mean_region_users();
  const double lo = in_.r_lo, hi = in_.r_hi;
  const double norm = 2.0 / (hi * hi - lo * lo);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double* s0 = survival_.data() + i * nx;
    const double* s1 = survival_.data() + (i + 1) * nx;
    const double* m0 = scol_slopes_.data() + i * nx;
    const double* m1 = scol_slopes_.data() + (i + 1) * nx;
    auto f = [&](double y) {
      double u = std::log(y);
      double h = u_[i + 1] - u_[i];
      double t = (u - u_[i]) / h;
      double t2 = t * t;
      double t3 = t2 * t;
      double b0 = 2.0 * t3 - 3.0 * t2 + 1.0;
      double b1 = t3 - 2.0 * t2 + t;
      double b2 = 3.0 * t2 - 2.0 * t3;
      double b3 = t3 - t2;
      double acc = 0.0;
      for (std::size_t j = 0; j < nx; ++j) {
        double s = b0 * s0[j] + h * b1 * m0[j] + b2 * s1[j] + h * b3 * m1[j];
        if (s < 0.0) s = 0.0;
        acc += wp[j] * -std::expm1(-mu * s);
      }
      return acc * norm * y;
    };
    total += gauss_kronrod_15(f, nodes_[i], nodes_[i + 1]).value;
  }
  return in_.n_rbs * in_.rb_bandwidth_hz * kLog2e * total;
}

double PfRegionModel::avg_throughput_sum() const {
  if (empty_ || zero_rate_) return 0.0;
  double total = 0.0;
  for (int k = 1; k <= k_max_; ++k) {
    double b = b_[static_cast<std::size_t>(k)];
    if (b == 0.0) continue;
    total += b * user_region_rate(k);
  }
  return total;
}

double PfRegionModel::rate_moment(int m) const {
  if (empty_) return 0.0;
  if (zero_rate_) return m == 0 ? mass_ : 0.0;
  const double lo = in_.r_lo, hi = in_.r_hi;
  const double norm = 2.0 / (hi * hi - lo * lo);
  double total = 0.0;
  for (int k = 1; k <= k_max_; ++k) {
    double c = c_[static_cast<std::size_t>(k)];
    if (c == 0.0) continue;
    const auto& row = rows_[static_cast<std::size_t>(k)];
    const auto& slopes = row_slopes_[static_cast<std::size_t>(k)];
    double ed = 0.0;
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      auto f = [&](double y) {
        double u = std::log(y);
        double r = in_.n_rbs * hermite_eval(u_[i], u_[i + 1], row[i],
                                            row[i + 1], slopes[i],
                                            slopes[i + 1], u);
        double p = 1.0;
        for (int q = 0; q < m; ++q) p *= r;
        return p * norm * y;
      };
      ed += gauss_kronrod_15(f, nodes_[i], nodes_[i + 1]).value;
    }
    total += c * ed;
  }
  return total;
}

// ---------------------------------------------------------------------------
// CellThroughputModel

CellThroughputModel::CellThroughputModel(const NetworkProfile& profile,
                                         const CellGeometry& geom,
                                         const BsLayout& layout, Scheme scheme,
                                         double omega, double zeta,
                                         const ModelOptions& opts,
                                         MasterTableCache* cache)
    : scheme_(scheme), omega_(omega), zeta_(zeta), opts_(opts) {
  opts_.validate();
  profile.validate();
  region_partition_ = make_region_partition(geom, omega);
  spectrum_ = make_partition(profile, scheme, zeta);
  mean_users_ = profile.mean_users(geom);
  int k_hi = poisson_kmax(mean_users_, opts_.poisson_tail, opts_.kmax_cap);

  MasterTableCache local_cache;
  MasterTableCache* tables = cache != nullptr ? cache : &local_cache;
  for (Region a : {Region::center, Region::edge}) {
    BandClass band_class = band_for_region(scheme, a);
    BandLinkModel band = make_band_link_model(profile, layout, spectrum_, band_class);
    PfRegionModel::Inputs in;
    in.region = a;
    in.r_lo = region_partition_.lo(a);
    in.r_hi = region_partition_.hi(a);
    in.n_rbs = spectrum_.n_rbs(a);
    in.p_region = region_partition_.prob(a);
    in.mean_cell_users = mean_users_;
    in.rb_bandwidth_hz = profile.rb_bandwidth_hz;
    bool degenerate = !(in.p_region > 1e-15) || !(mean_users_ > 0.0) ||
                      !(in.n_rbs > 0.0) || !(band.serving_tx_power_w > 0.0);
    std::shared_ptr<const BandCdfTable> master;
    if (!degenerate) {
      master = tables->get_or_build(band, opts_.policy, geom.min_dist,
                                    geom.circ_radius, opts_.master_d_nodes,
                                    k_hi, opts_);
    }
    auto model = std::make_shared<PfRegionModel>(master, band, in, opts_);
    (a == Region::center ? center_ : edge_) = std::move(model);
  }
}

double CellThroughputModel::user_cdf(double v) const {
  return center_->region_cdf(v) + edge_->region_cdf(v);
}

double CellThroughputModel::total_cdf_mass() const {
  return center_->cdf_mass() + edge_->cdf_mass();
}

double CellThroughputModel::percentile(double x) const {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::invalid_argument("percentile level must be in (0, 1)");
  }
  double mass = total_cdf_mass();
  if (x > mass) {
    throw NumericalError("percentile level exceeds the total CDF mass");
  }
  // A region with RBs but no users-worth of rate (zero RBs assigned) piles
  // its whole mass into an atom at v = 0; when that atom alone reaches the
  // level, the quantile is exactly zero.
  if (user_cdf(0.0) >= x) return 0.0;
  double lo = 0.0, hi = 0.0;
  bool any_positive = false;
  for (const PfRegionModel* r : {center_.get(), edge_.get()}) {
    if (r->empty() || r->zero_rate()) continue;
    lo = any_positive ? std::min(lo, r->min_positive_rate())
                      : r->min_positive_rate();
    hi = std::max(hi, r->max_rate());
    any_positive = true;
  }
  if (!any_positive) return 0.0;  // all rate mass at zero
  auto pred = [this, x](double v) { return user_cdf(v) >= x; };
  return bisect_increasing(pred, lo, hi, 1e-12 * hi);
}

double CellThroughputModel::avg_cell_throughput() const {
  return center_->avg_throughput() + edge_->avg_throughput();
}

double CellThroughputModel::avg_cell_throughput_sum() const {
  return center_->avg_throughput_sum() + edge_->avg_throughput_sum();
}

std::optional<double> CellThroughputModel::per_user_region_throughput(
    Region a) const {
  const PfRegionModel& r = region(a);
  if (r.empty()) return std::nullopt;
  return r.avg_throughput() / r.mean_region_users();
}

double CellThroughputModel::jain_index() const {
  double mass = total_cdf_mass();
  double m1 = center_->rate_moment(1) + edge_->rate_moment(1);
  double m2 = center_->rate_moment(2) + edge_->rate_moment(2);
  if (m2 <= 0.0) return 1.0;
  return m1 * m1 / (mass * m2);
}

ThroughputCdf CellThroughputModel::sampled_cdf() const {
  ThroughputCdf out;
  out.mass = total_cdf_mass();
  double lo = 0.0, hi = 0.0;
  bool any_positive = false;
  for (const PfRegionModel* r : {center_.get(), edge_.get()}) {
    if (r->empty() || r->zero_rate()) continue;
    lo = any_positive ? std::min(lo, r->min_positive_rate())
                      : r->min_positive_rate();
    hi = std::max(hi, r->max_rate());
    any_positive = true;
  }
  if (!any_positive) {
    out.v = {0.0, 1.0};
    out.f = {out.mass, out.mass};
    return out;
  }
  out.v = log_spaced(lo, hi, opts_.cdf_grid_points);
  out.f.resize(out.v.size());
  double running = 0.0;
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    running = std::max(running, user_cdf(out.v[i]));
    out.f[i] = running;
  }

  // Plateau: a gap between the attainable rate intervals of the two regions;
  // the CDF is flat there at the lower region's mass.
  struct Interval {
    double lo, hi, mass;
  };
  std::vector<Interval> spans;
  for (const PfRegionModel* r : {center_.get(), edge_.get()}) {
    if (r->empty() || r->cdf_mass() <= 1e-12) continue;
    if (r->zero_rate()) {
      spans.push_back({0.0, 0.0, r->cdf_mass()});
    } else {
      spans.push_back({r->min_positive_rate(), r->max_rate(), r->cdf_mass()});
    }
  }
  if (spans.size() == 2) {
    const Interval& a = spans[0].hi <= spans[1].hi ? spans[0] : spans[1];
    const Interval& b = spans[0].hi <= spans[1].hi ? spans[1] : spans[0];
    if (a.hi < b.lo * (1.0 - 1e-9)) {
      out.plateau = PlateauInfo{a.mass, a.hi, b.lo};
    }
  }
  return out;
}

}  // namespace frplan
