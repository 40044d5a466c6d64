#pragma once

#include <variant>
#include <vector>

#include "billspec/error.hpp"
#include "billspec/vec2.hpp"

namespace billspec {

struct Disk {
  double R = 1.0;
};

struct Ellipse {
  double a = 1.0;  ///< semi-axis along x1, a >= b
  double b = 1.0;
};

/// Region between two confocal ellipses; outer (a2, b2), inner (a1, b1).
struct ConfocalAnnulus {
  double a2 = 2.0, b2 = 1.0;
  double a1 = 1.5, b1 = 0.0;
};

struct CircularAnnulus {
  double R = 1.0;
  double r = 0.5;
};

/// Simple counterclockwise polygon.
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Concentric layers, layer k occupies radii[k+1] < |x| < radii[k].
///
/// With speeds.size() == radii.size() the innermost layer is a full disk;
/// with speeds.size() == radii.size() - 1 the last radius is a reflecting
/// inner wall.
struct RadialLayers {
  std::vector<double> radii;
  std::vector<double> speeds;

  std::size_t layer_count() const { return speeds.size(); }
  bool has_inner_wall() const { return speeds.size() + 1 == radii.size(); }
  double outer_radius(std::size_t k) const { return radii[k]; }
  /// Zero for a central disk layer.
  double inner_radius(std::size_t k) const { return k + 1 < radii.size() ? radii[k + 1] : 0.0; }
};

using Domain = std::variant<Disk, Ellipse, ConfocalAnnulus, CircularAnnulus, Polygon, RadialLayers>;

/// Throws Error{InvalidDomain} when the invariants of the table fail.
void validate(const Domain& domain);

Domain make_disk(double R);
Domain make_ellipse(double a, double b);
/// Inner semi-minor axis is derived from the shared focal distance.
Domain make_confocal_annulus(double a2, double b2, double a1);
Domain make_circular_annulus(double R, double r);
Domain make_polygon(std::vector<Vec2> vertices);
Domain make_rectangle(double Lx, double Ly);
Domain make_radial_layers(std::vector<double> radii, std::vector<double> speeds);

double diameter(const Domain& domain);
/// Largest inscribed radius (exact for conics and rectangles, bounded from
/// below by the distance from the centroid otherwise).
double inradius(const Domain& domain);

struct Tolerances {
  double boundary;  ///< eps_bd = 1e-10 diam
  double corner;    ///< eps_corner = 1e-9 diam
  double tangent;   ///< eps_tan = 1e-8
};
Tolerances tolerances(const Domain& domain);

/// Positive inside, zero on the walls, negative outside. Interfaces of a
/// RadialLayers table are not walls.
double signed_distance(const Domain& domain, Vec2 x);

/// Boundary component identifiers. Conic tables: 0 outer, 1 inner.
/// Polygon: edge index. RadialLayers: radius index (0 is the outer wall).
struct BoundaryHit {
  double t = 0.0;
  Vec2 p;
  Vec2 n;  ///< unit normal at p facing the side the ray came from
  int component = 0;
};

/// Inward unit normal at a wall point. For RadialLayers interfaces the
/// normal points toward the centre.
Vec2 boundary_normal(const Domain& domain, Vec2 p);

/// First boundary crossing of x + t xi with t > eps_bd. RadialLayers
/// interfaces count as crossings.
BoundaryHit intersect_ray(const Domain& domain, Vec2 x, Vec2 xi);

struct Metrics {
  double area = 0.0;
  double perimeter = 0.0;
};
Metrics metrics(const Domain& domain);

/// Perimeter of the ellipse x^2/a^2 + y^2/b^2 = 1 by adaptive quadrature.
double ellipse_perimeter(double a, double b);

/// Euclidean distance from x to the ellipse curve (not signed).
double distance_to_ellipse(double a, double b, Vec2 x);

bool is_conic(const Domain& domain);
bool is_circular(const Domain& domain);

}  // namespace billspec
