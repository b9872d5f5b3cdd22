#include "frplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frplan/errors.hpp"

namespace frplan {
namespace {

// Equal-area disc radius of a hexagon with the given side length.
double equal_area_radius(double hex_side) {
  return hex_side * std::sqrt(3.0 * std::sqrt(3.0) / (2.0 * std::numbers::pi));
}

int hex_distance(int q, int r) {
  return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
}

void check_geometry(double hex_side, double min_dist) {
  if (!(hex_side > 0.0)) throw ConfigError("cell radius must be positive");
  if (!(min_dist > 0.0)) throw ConfigError("minimum user distance must be positive");
  if (!(min_dist < equal_area_radius(hex_side))) {
    throw ConfigError("minimum user distance must be below the cell disc radius");
  }
}

}  // namespace

CellGeometry CellGeometry::from_hex_side(double hex_side, double min_dist) {
  check_geometry(hex_side, min_dist);
  return {hex_side, equal_area_radius(hex_side), min_dist};
}

CellGeometry CellGeometry::from_circ_radius(double circ_radius, double min_dist) {
  double hex_side = circ_radius / equal_area_radius(1.0);
  check_geometry(hex_side, min_dist);
  return {hex_side, circ_radius, min_dist};
}

BsLayout build_layout(double hex_side, int rings) {
  if (!(hex_side > 0.0)) throw ConfigError("cell radius must be positive");
  if (rings < 1) throw ConfigError("layout needs at least one interferer ring");
  BsLayout layout;
  layout.spacing = std::sqrt(3.0) * hex_side;
  layout.rings = rings;

  struct Axial {
    int q, r, ring;
  };
  std::vector<Axial> cells;
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      int dist = hex_distance(q, r);
      if (dist <= rings) cells.push_back({q, r, dist});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const Axial& a, const Axial& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    if (a.q != b.q) return a.q < b.q;
    return a.r < b.r;
  });

  layout.sites.reserve(cells.size());
  for (const Axial& c : cells) {
    BsLayout::Site site;
    site.pos = {layout.spacing * (c.q + 0.5 * c.r),
                layout.spacing * (0.5 * std::sqrt(3.0) * c.r)};
    site.ring = c.ring;
    site.color = ((c.q - c.r) % 3 + 3) % 3;
    layout.sites.push_back(site);
  }
  return layout;
}

double interferer_distance(double d, double theta, Vec2 bs) {
  double ux = d * std::cos(theta) - bs.x;
  double uy = d * std::sin(theta) - bs.y;
  return std::hypot(ux, uy);
}

BandClass ffr_center_band() { return {Scheme::ffr, true, 0}; }

BandClass ffr_edge_band(int color) { return {Scheme::ffr, false, color}; }

BandClass sfr_band(int color) { return {Scheme::sfr, false, color}; }

BandClass band_for_region(Scheme scheme, Region region) {
  if (scheme == Scheme::ffr) {
    return region == Region::center ? ffr_center_band() : ffr_edge_band(0);
  }
  return region == Region::edge ? sfr_band(0) : sfr_band(1);
}

std::vector<BandInterferer> interferer_sets(const BsLayout& layout,
                                            BandClass band) {
  std::vector<BandInterferer> out;
  for (int i = 1; i < static_cast<int>(layout.sites.size()); ++i) {
    const auto& site = layout.sites[i];
    if (band.scheme == Scheme::ffr) {
      if (band.ffr_center) {
        out.push_back({i, PowerClass::center});
      } else if (site.color == band.color) {
        // Reuse-3: only same-color cells transmit on this edge band.
        out.push_back({i, PowerClass::edge});
      }
    } else {
      out.push_back({i, site.color == band.color ? PowerClass::edge
                                                 : PowerClass::center});
    }
  }
  return out;
}

PowerClass serving_power_class(const BsLayout& layout, BandClass band) {
  if (band.scheme == Scheme::ffr) {
    return band.ffr_center ? PowerClass::center : PowerClass::edge;
  }
  return band.color == layout.sites[0].color ? PowerClass::edge
                                             : PowerClass::center;
}

RegionPartition make_region_partition(const CellGeometry& geom, double omega) {
  double omega_min = geom.min_dist / geom.circ_radius;
  if (!(omega >= omega_min - 1e-12 && omega <= 1.0 + 1e-12)) {
    throw ConfigError("omega outside [min_dist / circ_radius, 1]");
  }
  omega = std::clamp(omega, omega_min, 1.0);

  RegionPartition part;
  part.omega = omega;
  part.r_threshold = omega * geom.circ_radius;
  part.r_lo[0] = geom.min_dist;
  part.r_hi[0] = part.r_threshold;
  part.r_lo[1] = part.r_threshold;
  part.r_hi[1] = geom.circ_radius;
  double denom = geom.circ_radius * geom.circ_radius - geom.min_dist * geom.min_dist;
  for (int a = 0; a < 2; ++a) {
    part.probability[a] =
        (part.r_hi[a] * part.r_hi[a] - part.r_lo[a] * part.r_lo[a]) / denom;
    part.probability[a] = std::clamp(part.probability[a], 0.0, 1.0);
  }
  return part;
}

double region_probability(const CellGeometry& geom, double omega,
                          Region region) {
  return make_region_partition(geom, omega).prob(region);
}

const char* to_string(Region region) {
  return region == Region::center ? "center" : "edge";
}

const char* to_string(Scheme scheme) {
  return scheme == Scheme::ffr ? "ffr" : "sfr";
}

}  // namespace frplan
