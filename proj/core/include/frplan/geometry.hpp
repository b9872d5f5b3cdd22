#pragma once

#include <vector>

namespace frplan {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Region { center = 0, edge = 1 };
enum class Scheme { ffr, sfr };

// Power level an interfering cell applies on a given band's resource blocks.
// Full-reuse-power schemes use the same value for both classes.
enum class PowerClass { center, edge };

// Tagged cell plus surrounding interferer rings on a hexagonal lattice with a
// proper 3-coloring. The tagged cell is index 0 with color 0.
struct BsLayout {
  struct Site {
    Vec2 pos;
    int ring = 0;
    int color = 0;
  };
  std::vector<Site> sites;
  double spacing = 0.0;  // distance between adjacent sites, sqrt(3) * hex side
  int rings = 0;
};

// Cell disc model: a hexagon of side hex_side is replaced by the equal-area
// disc of radius circ_radius; users are at least min_dist from the site.
struct CellGeometry {
  double hex_side = 0.0;
  double circ_radius = 0.0;
  double min_dist = 0.0;

  static CellGeometry from_hex_side(double hex_side, double min_dist);
  static CellGeometry from_circ_radius(double circ_radius, double min_dist);
};

BsLayout build_layout(double hex_side, int rings = 2);

// Distance from a user at polar (d, theta) in the tagged cell to an
// interfering site at bs.
double interferer_distance(double d, double theta, Vec2 bs);

// Band identity for interference purposes. FFR has one reuse-1 center band
// and three reuse-3 edge bands; under SFR every one of the three bands is
// used everywhere with a per-cell power split.
struct BandClass {
  Scheme scheme = Scheme::ffr;
  bool ffr_center = false;
  int color = 0;
};

BandClass ffr_center_band();
BandClass ffr_edge_band(int color);
BandClass sfr_band(int color);

// Canonical band serving a user region of the tagged cell. For SFR the two
// center bands are congruent under lattice symmetry; color 1 is used.
BandClass band_for_region(Scheme scheme, Region region);

struct BandInterferer {
  int site = 0;
  PowerClass power = PowerClass::center;
};

// Sites interfering on the given band of the tagged cell, with the power
// class each applies there.
std::vector<BandInterferer> interferer_sets(const BsLayout& layout,
                                            BandClass band);

// Power class the tagged cell itself applies on the given band.
PowerClass serving_power_class(const BsLayout& layout, BandClass band);

// Annular split of the cell disc at r_threshold = omega * circ_radius.
struct RegionPartition {
  double omega = 0.0;
  double r_threshold = 0.0;
  double r_lo[2] = {0.0, 0.0};  // indexed by Region
  double r_hi[2] = {0.0, 0.0};
  double probability[2] = {0.0, 0.0};

  double lo(Region a) const { return r_lo[static_cast<int>(a)]; }
  double hi(Region a) const { return r_hi[static_cast<int>(a)]; }
  double prob(Region a) const { return probability[static_cast<int>(a)]; }
};

// Valid omega range is [min_dist / circ_radius, 1].
RegionPartition make_region_partition(const CellGeometry& geom, double omega);

double region_probability(const CellGeometry& geom, double omega,
                          Region region);

const char* to_string(Region region);
const char* to_string(Scheme scheme);

}  // namespace frplan
