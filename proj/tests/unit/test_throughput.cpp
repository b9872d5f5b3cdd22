#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "frplan/errors.hpp"
#include "frplan/geometry.hpp"
#include "frplan/radio.hpp"
#include "frplan/throughput.hpp"

using namespace frplan;

namespace {

constexpr double kHexSide = 500.0;
constexpr double kMinDist = 35.0;
// circumscribing radius of the equal-area disc for hex side 500
constexpr double kRm = 454.69587174634876;

CellGeometry test_geom() { return CellGeometry::from_hex_side(kHexSide, kMinDist); }

NetworkProfile profile_with(double mean_users, int num_rbs) {
  NetworkProfile p;
  p.num_rbs = num_rbs;
  p.user_density = mean_users / (std::numbers::pi * (kRm * kRm - kMinDist * kMinDist));
  return p;
}

const BsLayout& test_layout() {
  static BsLayout layout = build_layout(kHexSide, 2);
  return layout;
}

// Reference values computed with an independent high-precision implementation
// (adaptive quadrature over the closed-form conditional SINR CDF).
constexpr double kFfrCenterRateK1D200 = 778940.06099882;
constexpr double kFfrCenterRateK4D200 = 267709.8529233281;
constexpr double kFfrEdgeRateK4D380 = 258469.4877566964;
constexpr double kSfrEdgeRateK3D380 = 167183.62372753012;
constexpr double kSfrCenterRateK2D150 = 572385.9383701286;

// Independent reference for the small cell model: FFR, 12 RBs, rho = 0.5,
// omega = 0.6, mean load 4 users (dense tensor grids, cross-checked at two
// resolutions; agreement ~1e-5 relative).
constexpr double kDeskCdf02M = 4.1149482589908494e-05;
constexpr double kDeskCdf05M = 0.12801065511000195;
constexpr double kDeskCdf1M = 0.4724493981567728;
constexpr double kDeskCdf2M = 0.6898837655318212;
constexpr double kDeskCdf4M = 0.865453279036677;
constexpr double kDeskCdf8M = 0.9622208141227097;
constexpr double kDeskR5 = 402671.27318849746;
constexpr double kDeskAvgCell = 6552243.722321679;
constexpr double kDeskJain = 0.47626433199157675;

CellThroughputModel desk_model(double poisson_tail = 1e-8) {
  ModelOptions opts;
  opts.poisson_tail = poisson_tail;
  return CellThroughputModel(profile_with(4.0, 12), test_geom(), test_layout(),
                             Scheme::ffr, 0.6, 0.5, opts);
}

}  // namespace

TEST_CASE("pf per-rb rates match the independent reference") {
  NetworkProfile p = profile_with(4.0, 100);
  CellGeometry g = test_geom();

  CellThroughputModel ffr(p, g, test_layout(), Scheme::ffr, 0.6, 0.49);
  CHECK(ffr.region(Region::center).pf_rb_rate(1, 200.0) ==
        doctest::Approx(kFfrCenterRateK1D200).epsilon(5e-5));
  CHECK(ffr.region(Region::center).pf_rb_rate(4, 200.0) ==
        doctest::Approx(kFfrCenterRateK4D200).epsilon(5e-5));
  CHECK(ffr.region(Region::edge).pf_rb_rate(4, 380.0) ==
        doctest::Approx(kFfrEdgeRateK4D380).epsilon(5e-5));

  CellThroughputModel sfr(p, g, test_layout(), Scheme::sfr, 0.6, 0.5);
  CHECK(sfr.region(Region::edge).pf_rb_rate(3, 380.0) ==
        doctest::Approx(kSfrEdgeRateK3D380).epsilon(5e-5));
  CHECK(sfr.region(Region::center).pf_rb_rate(2, 150.0) ==
        doctest::Approx(kSfrCenterRateK2D150).epsilon(5e-5));
}

TEST_CASE("pdf-form and survival-form rates agree") {
  NetworkProfile p = profile_with(4.0, 100);
  CellThroughputModel m(p, test_geom(), test_layout(), Scheme::ffr, 0.6, 0.49);
  const PfRegionModel& center = m.region(Region::center);
  double d = 0.5 * kRm;
  double via_pdf = center.pf_rb_rate_direct(4, d, RateForm::pdf_form);
  double via_survival = center.pf_rb_rate_direct(4, d, RateForm::survival_form);
  CHECK(via_pdf == doctest::Approx(via_survival).epsilon(1e-6));
  // the tabulated/interpolated path reproduces the direct integral
  CHECK(center.pf_rb_rate(4, d) == doctest::Approx(via_survival).epsilon(1e-3));
  CHECK(center.pf_rb_rate(4, d) == doctest::Approx(via_survival).epsilon(5e-5));
}

TEST_CASE("desk cell model reproduces the reference cdf and summaries") {
  CellThroughputModel m = desk_model();
  const PfRegionModel& center = m.region(Region::center);
  const PfRegionModel& edge = m.region(Region::edge);

  CHECK(center.k_max() == 20);
  CHECK(edge.k_max() == 20);

  // coefficient mass identities
  double pc = m.partition().prob(Region::center);
  double pe = m.partition().prob(Region::edge);
  double occupied = -std::expm1(-4.0);
  CHECK(center.cdf_mass() == doctest::Approx(pc * occupied).epsilon(1e-7));
  CHECK(edge.cdf_mass() == doctest::Approx(pe * occupied).epsilon(1e-7));
  CHECK(m.total_cdf_mass() == doctest::Approx(occupied).epsilon(1e-6));

  CHECK(m.user_cdf(0.2e6) == doctest::Approx(kDeskCdf02M).epsilon(5e-2));
  CHECK(std::abs(m.user_cdf(0.2e6) - kDeskCdf02M) < 2e-6);
  CHECK(m.user_cdf(0.5e6) == doctest::Approx(kDeskCdf05M).epsilon(2e-4));
  CHECK(m.user_cdf(1.0e6) == doctest::Approx(kDeskCdf1M).epsilon(2e-4));
  CHECK(m.user_cdf(2.0e6) == doctest::Approx(kDeskCdf2M).epsilon(2e-4));
  CHECK(m.user_cdf(4.0e6) == doctest::Approx(kDeskCdf4M).epsilon(2e-4));
  CHECK(m.user_cdf(8.0e6) == doctest::Approx(kDeskCdf8M).epsilon(2e-4));

  CHECK(m.percentile(0.05) == doctest::Approx(kDeskR5).epsilon(5e-4));
  CHECK(m.avg_cell_throughput() == doctest::Approx(kDeskAvgCell).epsilon(2e-4));
  CHECK(m.avg_cell_throughput_sum() == doctest::Approx(kDeskAvgCell).epsilon(2e-4));
  CHECK(m.jain_index() == doctest::Approx(kDeskJain).epsilon(5e-4));
}

TEST_CASE("cdf is monotone and percentile is adjoint to it") {
  CellThroughputModel m = desk_model();
  ThroughputCdf cdf = m.sampled_cdf();
  REQUIRE(cdf.v.size() >= 16);
  for (std::size_t i = 1; i < cdf.v.size(); ++i) {
    CHECK(cdf.v[i] > cdf.v[i - 1]);
    CHECK(cdf.f[i] >= cdf.f[i - 1]);
  }
  CHECK(cdf.f.back() <= cdf.mass + 1e-9);
  CHECK(!cdf.plateau.has_value());  // both region rate intervals overlap here

  for (double x : {0.02, 0.05, 0.2, 0.5, 0.9}) {
    double v = m.percentile(x);
    CHECK(m.user_cdf(v) >= x - 1e-9);
  }
  for (double v : {0.4e6, 1.0e6, 2.5e6}) {
    double x = m.user_cdf(v);
    CHECK(m.percentile(x) <= v * (1.0 + 1e-9));
  }
}

TEST_CASE("poisson truncation depth does not move the results") {
  CellThroughputModel coarse = desk_model(1e-8);
  CellThroughputModel fine = desk_model(1e-10);
  CHECK(fine.region(Region::center).k_max() > coarse.region(Region::center).k_max());
  CHECK(coarse.percentile(0.05) ==
        doctest::Approx(fine.percentile(0.05)).epsilon(1e-6));
  CHECK(coarse.avg_cell_throughput() ==
        doctest::Approx(fine.avg_cell_throughput()).epsilon(1e-6));
  CHECK(coarse.user_cdf(1.0e6) ==
        doctest::Approx(fine.user_cdf(1.0e6)).epsilon(1e-6));
}

TEST_CASE("rate inversion round-trips through distance") {
  CellThroughputModel m = desk_model();
  const PfRegionModel& edge = m.region(Region::edge);
  double d0 = 0.7 * kRm;
  REQUIRE(d0 > edge.r_lo());
  REQUIRE(d0 < edge.r_hi());
  for (int k : {1, 3, 7}) {
    double v = edge.region_rate(k, d0);
    double d = edge.invert_rate_to_distance(k, v);
    CHECK(std::abs(d - d0) < 1e-6 * kRm);
  }
  // saturation conventions: rate above the region maximum maps to the inner
  // boundary, below the minimum to the outer boundary
  CHECK(edge.invert_rate_to_distance(1, 2.0 * edge.max_rate()) ==
        doctest::Approx(edge.r_lo()));
  CHECK(edge.invert_rate_to_distance(1, 0.0) == doctest::Approx(edge.r_hi()));
  CHECK(edge.pr_rate_below(3, -1.0) == 0.0);
  CHECK(edge.pr_rate_below(3, 0.0) == 0.0);
  CHECK(edge.pr_rate_below(3, 2.0 * edge.max_rate()) == doctest::Approx(1.0));
}

TEST_CASE("pf contention orderings hold") {
  CellThroughputModel m = desk_model();
  const PfRegionModel& center = m.region(Region::center);
  double prev_user = 0.0;
  double prev_cell = 0.0;
  for (int k = 1; k <= 6; ++k) {
    double user = center.user_region_rate(k);
    double cell = k * user;
    if (k > 1) {
      CHECK(user < prev_user);        // per-user share shrinks with contention
      CHECK(cell > prev_cell);        // multi-user diversity grows the total
    }
    prev_user = user;
    prev_cell = cell;
  }
}

TEST_CASE("both cell-throughput routes agree at full scale") {
  NetworkProfile p = profile_with(8.0, 100);
  CellThroughputModel m(p, test_geom(), test_layout(), Scheme::ffr, 0.6, 0.49);
  CHECK(m.total_cdf_mass() == doctest::Approx(-std::expm1(-8.0)).epsilon(1e-6));
  double via_mixture = m.avg_cell_throughput();
  double via_sum = m.avg_cell_throughput_sum();
  CHECK(via_mixture == doctest::Approx(via_sum).epsilon(1e-4));

  double tau_c = *m.per_user_region_throughput(Region::center);
  double tau_e = *m.per_user_region_throughput(Region::edge);
  double mu_c = 8.0 * m.partition().prob(Region::center);
  double mu_e = 8.0 * m.partition().prob(Region::edge);
  CHECK(tau_c * mu_c + tau_e * mu_e ==
        doctest::Approx(via_mixture).epsilon(1e-12));
}

TEST_CASE("degenerate partitions collapse gracefully") {
  NetworkProfile p = profile_with(4.0, 12);

  SUBCASE("omega = 1 leaves no edge region") {
    CellThroughputModel m(p, test_geom(), test_layout(), Scheme::ffr, 1.0, 0.5);
    CHECK(m.region(Region::edge).empty());
    CHECK(m.region(Region::edge).region_cdf(1e6) == 0.0);
    CHECK(!m.per_user_region_throughput(Region::edge).has_value());
    CHECK(m.total_cdf_mass() == doctest::Approx(-std::expm1(-4.0)).epsilon(1e-6));
    CHECK(m.avg_cell_throughput() ==
          doctest::Approx(m.region(Region::center).avg_throughput()));
  }

  SUBCASE("zero user density leaves no cdf mass") {
    NetworkProfile empty_p = profile_with(0.0, 12);
    CellThroughputModel m(empty_p, test_geom(), test_layout(), Scheme::ffr, 0.6, 0.5);
    CHECK(m.total_cdf_mass() == 0.0);
    CHECK(m.user_cdf(1e6) == 0.0);
    CHECK(m.avg_cell_throughput() == 0.0);
    CHECK_THROWS_AS((void)m.percentile(0.05), NumericalError);
  }

  SUBCASE("sfr with beta = 0 silences the center band") {
    CellThroughputModel m(p, test_geom(), test_layout(), Scheme::sfr, 0.6, 0.0);
    const PfRegionModel& center = m.region(Region::center);
    CHECK(center.zero_rate());
    CHECK(center.region_cdf(0.0) == doctest::Approx(center.cdf_mass()));
    // the whole center mass sits at rate zero: an atom at the origin and a
    // plateau up to the smallest edge rate
    ThroughputCdf cdf = m.sampled_cdf();
    REQUIRE(cdf.plateau.has_value());
    CHECK(cdf.plateau->level == doctest::Approx(center.cdf_mass()).epsilon(1e-9));
    CHECK(cdf.plateau->v_lo == 0.0);
    CHECK(cdf.plateau->v_hi ==
          doctest::Approx(m.region(Region::edge).min_positive_rate()));
    // the atom at v = 0 already exceeds the 5% level, so the quantile is 0;
    // levels above the atom mass fall into the positive edge rates
    CHECK(m.percentile(0.05) == 0.0);
    double above = center.cdf_mass() + 0.05;
    CHECK(m.percentile(above) >=
          m.region(Region::edge).min_positive_rate() * (1.0 - 1e-9));
  }

  SUBCASE("ffr with rho = 1 starves the edge band") {
    CellThroughputModel m(p, test_geom(), test_layout(), Scheme::ffr, 0.3, 1.0);
    const PfRegionModel& edge = m.region(Region::edge);
    CHECK(edge.zero_rate());
    CHECK(edge.region_cdf(0.0) == doctest::Approx(edge.cdf_mass()));
    // nearly all users live in the zero-rate edge region, so the lower
    // percentiles are exactly zero while high levels reach the center rates
    CHECK(edge.cdf_mass() > 0.05);
    CHECK(m.percentile(0.05) == 0.0);
    double above = edge.cdf_mass() + 0.01;
    CHECK(m.percentile(above) > 0.0);
  }
}

TEST_CASE("master tables are shared across compatible designs") {
  NetworkProfile p = profile_with(4.0, 12);
  CellGeometry g = test_geom();
  ModelOptions opts;

  MasterTableCache cache;
  CellThroughputModel a(p, g, test_layout(), Scheme::ffr, 0.55, 0.25, opts, &cache);
  CHECK(cache.size() == 2);  // one table per band class
  // all power splits share the same interference ratios under equal powers
  CellThroughputModel b(p, g, test_layout(), Scheme::ffr, 0.65, 0.5, opts, &cache);
  CHECK(cache.size() == 2);

  CellThroughputModel standalone(p, g, test_layout(), Scheme::ffr, 0.65, 0.5, opts);
  CHECK(b.avg_cell_throughput() ==
        doctest::Approx(standalone.avg_cell_throughput()).epsilon(1e-14));
  CHECK(b.percentile(0.05) ==
        doctest::Approx(standalone.percentile(0.05)).epsilon(1e-12));

  // a different sfr power ratio changes the interference structure
  CellThroughputModel s1(p, g, test_layout(), Scheme::sfr, 0.6, 0.5, opts, &cache);
  CHECK(cache.size() == 4);
  CellThroughputModel s2(p, g, test_layout(), Scheme::sfr, 0.7, 0.5, opts, &cache);
  CHECK(cache.size() == 4);
  CellThroughputModel s3(p, g, test_layout(), Scheme::sfr, 0.6, 0.8, opts, &cache);
  CHECK(cache.size() == 6);
}
