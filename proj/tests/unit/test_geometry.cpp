#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "frplan/errors.hpp"
#include "frplan/geometry.hpp"

using namespace frplan;

namespace {
constexpr double kHexSide = 500.0;
// Reference values computed with an independent high-precision implementation.
constexpr double kCircRadius = 454.69587174634876;
constexpr double kSpacing = 866.0254037844386;
}  // namespace

TEST_CASE("equal-area disc radius") {
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, 35.0);
  CHECK(g.circ_radius == doctest::Approx(kCircRadius).epsilon(1e-12));
  // hex area == disc area
  double hex_area = 1.5 * std::sqrt(3.0) * kHexSide * kHexSide;
  double disc_area = std::numbers::pi * g.circ_radius * g.circ_radius;
  CHECK(hex_area == doctest::Approx(disc_area).epsilon(1e-12));

  CellGeometry inv = CellGeometry::from_circ_radius(g.circ_radius, 35.0);
  CHECK(inv.hex_side == doctest::Approx(kHexSide).epsilon(1e-12));

  CHECK_THROWS_AS(CellGeometry::from_hex_side(-1.0, 35.0), ConfigError);
  CHECK_THROWS_AS(CellGeometry::from_hex_side(30.0, 35.0), ConfigError);
}

TEST_CASE("two-ring layout: counts, spacing, proper coloring") {
  BsLayout layout = build_layout(kHexSide, 2);
  REQUIRE(layout.sites.size() == 19);
  CHECK(layout.spacing == doctest::Approx(kSpacing).epsilon(1e-12));
  CHECK(layout.sites[0].ring == 0);
  CHECK(layout.sites[0].color == 0);

  int ring_count[3] = {0, 0, 0};
  for (const auto& s : layout.sites) ring_count[s.ring]++;
  CHECK(ring_count[0] == 1);
  CHECK(ring_count[1] == 6);
  CHECK(ring_count[2] == 12);

  // Ring-1 sites sit at the lattice spacing and use only the two non-serving
  // colors (proper coloring: no adjacent same-color cells).
  int ring1_colors[3] = {0, 0, 0};
  for (const auto& s : layout.sites) {
    if (s.ring != 1) continue;
    CHECK(std::hypot(s.pos.x, s.pos.y) == doctest::Approx(kSpacing).epsilon(1e-12));
    ring1_colors[s.color]++;
  }
  CHECK(ring1_colors[0] == 0);
  CHECK(ring1_colors[1] == 3);
  CHECK(ring1_colors[2] == 3);

  // Exactly six same-color sites in ring 2, all at distance 3 * hex side.
  int same_color = 0;
  for (const auto& s : layout.sites) {
    if (s.ring == 2 && s.color == 0) {
      ++same_color;
      CHECK(std::hypot(s.pos.x, s.pos.y) ==
            doctest::Approx(3.0 * kHexSide).epsilon(1e-12));
    }
  }
  CHECK(same_color == 6);

  // Each color class has the same size.
  int per_color[3] = {0, 0, 0};
  for (const auto& s : layout.sites) per_color[s.color]++;
  CHECK(per_color[0] == 7);
  CHECK(per_color[1] == 6);
  CHECK(per_color[2] == 6);
}

TEST_CASE("interferer distance") {
  CHECK(interferer_distance(200.0, std::numbers::pi / 3.0, {kSpacing, 0.0}) ==
        doctest::Approx(785.3629219941009).epsilon(1e-12));
  // User on the line toward the interferer.
  CHECK(interferer_distance(100.0, 0.0, {kSpacing, 0.0}) ==
        doctest::Approx(kSpacing - 100.0).epsilon(1e-12));
  // And directly away from it.
  CHECK(interferer_distance(100.0, std::numbers::pi, {kSpacing, 0.0}) ==
        doctest::Approx(kSpacing + 100.0).epsilon(1e-12));
}

TEST_CASE("region partition bounds and probabilities") {
  CellGeometry g = CellGeometry::from_hex_side(kHexSide, 35.0);
  RegionPartition p = make_region_partition(g, 0.6);
  CHECK(p.r_threshold == doctest::Approx(272.81752304780923).epsilon(1e-12));
  CHECK(p.lo(Region::center) == doctest::Approx(35.0));
  CHECK(p.hi(Region::center) == doctest::Approx(p.r_threshold));
  CHECK(p.lo(Region::edge) == doctest::Approx(p.r_threshold));
  CHECK(p.hi(Region::edge) == doctest::Approx(g.circ_radius));
  CHECK(p.prob(Region::center) ==
        doctest::Approx(0.3561853480189367).epsilon(1e-12));
  CHECK(p.prob(Region::center) + p.prob(Region::edge) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // Degenerate splits: all-edge at the lower omega bound, all-center at 1.
  RegionPartition lo = make_region_partition(g, g.min_dist / g.circ_radius);
  CHECK(lo.prob(Region::center) == doctest::Approx(0.0));
  RegionPartition hi = make_region_partition(g, 1.0);
  CHECK(hi.prob(Region::edge) == doctest::Approx(0.0));

  CHECK_THROWS_AS(make_region_partition(g, 0.01), ConfigError);
  CHECK_THROWS_AS(make_region_partition(g, 1.01), ConfigError);
}

TEST_CASE("interferer sets per scheme and band") {
  BsLayout layout = build_layout(kHexSide, 2);

  auto ffr_center = interferer_sets(layout, ffr_center_band());
  CHECK(ffr_center.size() == 18);

  auto ffr_edge = interferer_sets(layout, ffr_edge_band(0));
  REQUIRE(ffr_edge.size() == 6);
  for (const auto& e : ffr_edge) {
    const auto& s = layout.sites[e.site];
    CHECK(s.color == 0);
    CHECK(std::hypot(s.pos.x, s.pos.y) ==
          doctest::Approx(3.0 * kHexSide).epsilon(1e-12));
  }

  auto sfr0 = interferer_sets(layout, sfr_band(0));
  REQUIRE(sfr0.size() == 18);
  int edge_power = 0;
  for (const auto& e : sfr0) {
    if (e.power == PowerClass::edge) {
      ++edge_power;
      CHECK(layout.sites[e.site].color == 0);
    }
  }
  CHECK(edge_power == 6);

  auto sfr1 = interferer_sets(layout, sfr_band(1));
  int edge_power1 = 0;
  for (const auto& e : sfr1) edge_power1 += e.power == PowerClass::edge;
  CHECK(edge_power1 == 6);

  // The tagged cell serves its own color's band at edge power under SFR, and
  // the edge band of its color under FFR.
  CHECK(serving_power_class(layout, sfr_band(0)) == PowerClass::edge);
  CHECK(serving_power_class(layout, sfr_band(1)) == PowerClass::center);
  CHECK(serving_power_class(layout, ffr_center_band()) == PowerClass::center);
  CHECK(serving_power_class(layout, ffr_edge_band(0)) == PowerClass::edge);
}

TEST_CASE("band_for_region picks the serving bands") {
  BandClass fc = band_for_region(Scheme::ffr, Region::center);
  CHECK(fc.ffr_center);
  BandClass fe = band_for_region(Scheme::ffr, Region::edge);
  CHECK(!fe.ffr_center);
  CHECK(fe.color == 0);
  BandClass se = band_for_region(Scheme::sfr, Region::edge);
  CHECK(se.color == 0);
  BandClass sc = band_for_region(Scheme::sfr, Region::center);
  CHECK(sc.color == 1);
}
