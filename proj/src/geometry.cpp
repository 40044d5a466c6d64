#include "billspec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace billspec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::VertexSingular: return "VertexSingular";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::GrazingHit: return "GrazingHit";
    case ErrorCode::WrongDomain: return "WrongDomain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
    case ErrorCode::InaccessibleLayer: return "InaccessibleLayer";
    case ErrorCode::SpectrumTruncated: return "SpectrumTruncated";
    case ErrorCode::NoSurfaceState: return "NoSurfaceState";
    case ErrorCode::OutsideZone: return "OutsideZone";
    case ErrorCode::ExceptionalSet: return "ExceptionalSet";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidDomain, msg); }

double polygon_signed_area(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_seg = [](Vec2 a, Vec2 b, Vec2 c) {
    return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
           c.y <= std::max(a.y, b.y);
  };
  if (d1 == 0 && on_seg(q1, q2, p1)) return true;
  if (d2 == 0 && on_seg(q1, q2, p2)) return true;
  if (d3 == 0 && on_seg(p1, p2, q1)) return true;
  if (d4 == 0 && on_seg(p1, p2, q2)) return true;
  return false;
}

double distance_to_segment(Vec2 a, Vec2 b, Vec2 x) {
  const Vec2 d = b - a;
  const double s = std::clamp(dot(x - a, d) / dot(d, d), 0.0, 1.0);
  return norm(x - (a + d * s));
}

bool point_in_polygon(const std::vector<Vec2>& v, Vec2 x) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > x.y) != (v[j].y > x.y)) {
      const double xc = v[j].x + (x.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (x.x < xc) inside = !inside;
    }
  }
  return inside;
}

// Root of the secular function for the point-to-ellipse projection
// (z0, z1 > 0, r0 = (e0/e1)^2), solved by bisection to full precision.
double ellipse_projection_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0), ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0) s0 = s;
    else if (g < 0) s1 = s;
    else break;
  }
  return s;
}

double ellipse_distance_first_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0) {
    if (y0 > 0) {
      const double z0 = y0 / e0, z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g != 0) {
        const double r0 = (e0 / e1) * (e0 / e1);
        const double sbar = ellipse_projection_root(r0, z0, z1, g);
        const double x0 = r0 * y0 / (sbar + r0), x1 = y1 / (sbar + 1.0);
        return std::hypot(x0 - y0, x1 - y1);
      }
      return 0.0;
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0, denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0, x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

bool inside_ellipse(double a, double b, Vec2 x) {
  return (x.x / a) * (x.x / a) + (x.y / b) * (x.y / b) <= 1.0;
}

double signed_ellipse(double a, double b, Vec2 x) {
  const double d = distance_to_ellipse(a, b, x);
  return inside_ellipse(a, b, x) ? d : -d;
}

// Unit outward normal of the ellipse at (or near) p.
Vec2 ellipse_outward(double a, double b, Vec2 p) {
  return normalized(Vec2{p.x / (a * a), p.y / (b * b)});
}

// Both real roots of |x + t xi|_E = 1 for the ellipse norm, ascending.
std::optional<std::pair<double, double>> conic_roots(double a, double b, Vec2 x, Vec2 xi) {
  const double ia2 = 1.0 / (a * a), ib2 = 1.0 / (b * b);
  const double A = xi.x * xi.x * ia2 + xi.y * xi.y * ib2;
  const double B = 2.0 * (x.x * xi.x * ia2 + x.y * xi.y * ib2);
  const double C = x.x * x.x * ia2 + x.y * x.y * ib2 - 1.0;
  double disc = B * B - 4.0 * A * C;
  // a tangent ray can miss by rounding; keep it as a double root
  if (disc < 0 && disc >= -1e-14 * (B * B + std::abs(4.0 * A * C))) disc = 0.0;
  if (disc < 0) return std::nullopt;
  const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
  double t1, t2;
  if (q == 0.0) {
    t1 = t2 = 0.0;
  } else {
    t1 = q / A;
    t2 = C / q;
  }
  if (t1 > t2) std::swap(t1, t2);
  return std::make_pair(t1, t2);
}

struct Candidate {
  double t = std::numeric_limits<double>::infinity();
  int component = -1;
  Vec2 outward;  // gradient direction of the component's defining function
  double edge_param = 0.0;
  double edge_length = 0.0;
};

void conic_candidates(double a, double b, int component, Vec2 x, Vec2 xi, double eps,
                      Candidate& best) {
  const auto roots = conic_roots(a, b, x, xi);
  if (!roots) return;
  for (double t : {roots->first, roots->second}) {
    if (t > eps && t < best.t) {
      best.t = t;
      best.component = component;
      best.outward = ellipse_outward(a, b, x + xi * t);
    }
  }
}

}  // namespace

double distance_to_ellipse(double a, double b, Vec2 x) {
  const double ax = std::abs(x.x), ay = std::abs(x.y);
  if (a == b) return std::abs(std::hypot(ax, ay) - a);
  if (a > b) return ellipse_distance_first_quadrant(a, b, ax, ay);
  return ellipse_distance_first_quadrant(b, a, ay, ax);
}

void validate(const Domain& domain) {
  std::visit(
      overloaded{
          [](const Disk& d) {
            if (!(d.R > 0)) invalid("disk radius must be positive");
          },
          [](const Ellipse& e) {
            if (!(e.b > 0 && e.a >= e.b)) invalid("ellipse requires a >= b > 0");
          },
          [](const ConfocalAnnulus& c) {
            if (!(c.a2 > c.a1 && c.a1 > c.b1 && c.b1 > 0 && c.a2 > c.b2 && c.b2 > 0))
              invalid("confocal annulus requires a2 > a1 > b1 > 0 and a2 > b2 > 0");
            const double c2o = c.a2 * c.a2 - c.b2 * c.b2, c2i = c.a1 * c.a1 - c.b1 * c.b1;
            if (std::abs(c2o - c2i) > 1e-12 * c.a2 * c.a2) invalid("ellipses are not confocal");
            if (c.b2 <= c.b1) invalid("inner ellipse must lie inside the outer one");
          },
          [](const CircularAnnulus& c) {
            if (!(c.R > c.r && c.r > 0)) invalid("annulus requires R > r > 0");
          },
          [](const Polygon& p) {
            const auto& v = p.vertices;
            if (v.size() < 3) invalid("polygon needs at least 3 vertices");
            if (!(polygon_signed_area(v) > 0)) invalid("polygon must be counterclockwise");
            const std::size_t n = v.size();
            for (std::size_t i = 0; i < n; ++i) {
              if (v[i] == v[(i + 1) % n]) invalid("repeated polygon vertex");
              for (std::size_t j = i + 1; j < n; ++j) {
                if (j == i + 1 || (i == 0 && j == n - 1)) continue;
                if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                  invalid("polygon is not simple");
              }
            }
          },
          [](const RadialLayers& l) {
            if (l.radii.empty() || l.speeds.empty()) invalid("layers need radii and speeds");
            if (l.speeds.size() != l.radii.size() && l.speeds.size() + 1 != l.radii.size())
              invalid("speeds must have one entry per layer");
            for (std::size_t k = 0; k < l.radii.size(); ++k) {
              if (!(l.radii[k] > 0)) invalid("radii must be positive");
              if (k > 0 && !(l.radii[k] < l.radii[k - 1])) invalid("radii must strictly decrease");
            }
            for (double c : l.speeds)
              if (!(c > 0)) invalid("speeds must be positive");
          },
      },
      domain);
}

Domain make_disk(double R) {
  Domain d = Disk{R};
  validate(d);
  return d;
}

Domain make_ellipse(double a, double b) {
  Domain d = Ellipse{a, b};
  validate(d);
  return d;
}

Domain make_confocal_annulus(double a2, double b2, double a1) {
  const double c2 = a2 * a2 - b2 * b2;
  const double b1sq = a1 * a1 - c2;
  if (!(b1sq > 0)) invalid("inner ellipse degenerates (a1 must exceed the focal distance)");
  Domain d = ConfocalAnnulus{a2, b2, a1, std::sqrt(b1sq)};
  validate(d);
  return d;
}

Domain make_circular_annulus(double R, double r) {
  Domain d = CircularAnnulus{R, r};
  validate(d);
  return d;
}

Domain make_polygon(std::vector<Vec2> vertices) {
  Domain d = Polygon{std::move(vertices)};
  validate(d);
  return d;
}

Domain make_rectangle(double Lx, double Ly) {
  return make_polygon({{0, 0}, {Lx, 0}, {Lx, Ly}, {0, Ly}});
}

Domain make_radial_layers(std::vector<double> radii, std::vector<double> speeds) {
  Domain d = RadialLayers{std::move(radii), std::move(speeds)};
  validate(d);
  return d;
}

bool is_conic(const Domain& domain) {
  return std::holds_alternative<Disk>(domain) || std::holds_alternative<Ellipse>(domain) ||
         std::holds_alternative<ConfocalAnnulus>(domain) ||
         std::holds_alternative<CircularAnnulus>(domain);
}

bool is_circular(const Domain& domain) {
  return std::holds_alternative<Disk>(domain) || std::holds_alternative<CircularAnnulus>(domain) ||
         std::holds_alternative<RadialLayers>(domain);
}

double diameter(const Domain& domain) {
  return std::visit(overloaded{
                        [](const Disk& d) { return 2.0 * d.R; },
                        [](const Ellipse& e) { return 2.0 * e.a; },
                        [](const ConfocalAnnulus& c) { return 2.0 * c.a2; },
                        [](const CircularAnnulus& c) { return 2.0 * c.R; },
                        [](const Polygon& p) {
                          double best = 0.0;
                          for (auto a : p.vertices)
                            for (auto b : p.vertices) best = std::max(best, norm(a - b));
                          return best;
                        },
                        [](const RadialLayers& l) { return 2.0 * l.radii.front(); },
                    },
                    domain);
}

double inradius(const Domain& domain) {
  auto search = [&](Vec2 lo, Vec2 hi) {
    // coarse grid followed by a shrinking pattern search
    constexpr int n = 64;
    Vec2 best = lo;
    double best_d = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const Vec2 x{lo.x + (hi.x - lo.x) * i / n, lo.y + (hi.y - lo.y) * j / n};
        const double d = signed_distance(domain, x);
        if (d > best_d) best_d = d, best = x;
      }
    double step = std::max(hi.x - lo.x, hi.y - lo.y) / n;
    while (step > 1e-12 * std::max(hi.x - lo.x, hi.y - lo.y)) {
      bool moved = false;
      for (Vec2 dir : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        const Vec2 x = best + dir * step;
        const double d = signed_distance(domain, x);
        if (d > best_d) best_d = d, best = x, moved = true;
      }
      if (!moved) step *= 0.5;
    }
    return best_d;
  };
  return std::visit(overloaded{
                        [](const Disk& d) { return d.R; },
                        [](const Ellipse& e) { return e.b; },
                        [&](const ConfocalAnnulus& c) { return search({-c.a2, -c.b2}, {c.a2, c.b2}); },
                        [](const CircularAnnulus& c) { return 0.5 * (c.R - c.r); },
                        [&](const Polygon& p) {
                          Vec2 lo = p.vertices.front(), hi = lo;
                          for (auto v : p.vertices) {
                            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
                            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
                          }
                          return search(lo, hi);
                        },
                        [](const RadialLayers& l) {
                          return l.has_inner_wall() ? 0.5 * (l.radii.front() - l.radii.back())
                                                    : l.radii.front();
                        },
                    },
                    domain);
}

Tolerances tolerances(const Domain& domain) {
  const double diam = diameter(domain);
  return {1e-10 * diam, 1e-9 * diam, 1e-8};
}

double signed_distance(const Domain& domain, Vec2 x) {
  return std::visit(
      overloaded{
          [&](const Disk& d) { return d.R - norm(x); },
          [&](const Ellipse& e) { return signed_ellipse(e.a, e.b, x); },
          [&](const ConfocalAnnulus& c) {
            return std::min(signed_ellipse(c.a2, c.b2, x), -signed_ellipse(c.a1, c.b1, x));
          },
          [&](const CircularAnnulus& c) {
            const double r = norm(x);
            return std::min(c.R - r, r - c.r);
          },
          [&](const Polygon& p) {
            const auto& v = p.vertices;
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i)
              d = std::min(d, distance_to_segment(v[i], v[(i + 1) % v.size()], x));
            return point_in_polygon(v, x) ? d : -d;
          },
          [&](const RadialLayers& l) {
            const double r = norm(x);
            double d = l.radii.front() - r;
            if (l.has_inner_wall()) d = std::min(d, r - l.radii.back());
            return d;
          },
      },
      domain);
}

Vec2 boundary_normal(const Domain& domain, Vec2 p) {
  const Tolerances tol = tolerances(domain);
  auto require = [&](double dist) {
    if (dist > tol.boundary)
      throw Error(ErrorCode::NotOnBoundary, "point is " + std::to_string(dist) + " from the boundary");
  };
  return std::visit(
      overloaded{
          [&](const Disk& d) {
            require(std::abs(norm(p) - d.R));
            return -normalized(p);
          },
          [&](const Ellipse& e) {
            require(distance_to_ellipse(e.a, e.b, p));
            return -ellipse_outward(e.a, e.b, p);
          },
          [&](const ConfocalAnnulus& c) {
            const double d_out = distance_to_ellipse(c.a2, c.b2, p);
            const double d_in = distance_to_ellipse(c.a1, c.b1, p);
            if (d_out <= d_in) {
              require(d_out);
              return -ellipse_outward(c.a2, c.b2, p);
            }
            require(d_in);
            return ellipse_outward(c.a1, c.b1, p);
          },
          [&](const CircularAnnulus& c) {
            const double r = norm(p);
            if (std::abs(r - c.R) <= std::abs(r - c.r)) {
              require(std::abs(r - c.R));
              return -normalized(p);
            }
            require(std::abs(r - c.r));
            return normalized(p);
          },
          [&](const Polygon& poly) {
            const auto& v = poly.vertices;
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i) {
              const double d = distance_to_segment(v[i], v[(i + 1) % v.size()], p);
              if (d < best_d) best_d = d, best = i;
            }
            require(best_d);
            for (auto vert : v)
              if (norm(vert - p) <= tol.corner)
                throw Error(ErrorCode::VertexSingular, "normal undefined at a polygon vertex");
            return normalized(perp(v[(best + 1) % v.size()] - v[best]));
          },
          [&](const RadialLayers& l) {
            const double r = norm(p);
            std::size_t best = 0;
            for (std::size_t k = 1; k < l.radii.size(); ++k)
              if (std::abs(r - l.radii[k]) < std::abs(r - l.radii[best])) best = k;
            require(std::abs(r - l.radii[best]));
            const bool inner_wall = l.has_inner_wall() && best + 1 == l.radii.size();
            return inner_wall ? normalized(p) : -normalized(p);
          },
      },
      domain);
}

BoundaryHit intersect_ray(const Domain& domain, Vec2 x, Vec2 xi) {
  const Tolerances tol = tolerances(domain);
  Candidate best;
  std::visit(overloaded{
                 [&](const Disk& d) { conic_candidates(d.R, d.R, 0, x, xi, tol.boundary, best); },
                 [&](const Ellipse& e) { conic_candidates(e.a, e.b, 0, x, xi, tol.boundary, best); },
                 [&](const ConfocalAnnulus& c) {
                   conic_candidates(c.a2, c.b2, 0, x, xi, tol.boundary, best);
                   conic_candidates(c.a1, c.b1, 1, x, xi, tol.boundary, best);
                 },
                 [&](const CircularAnnulus& c) {
                   conic_candidates(c.R, c.R, 0, x, xi, tol.boundary, best);
                   conic_candidates(c.r, c.r, 1, x, xi, tol.boundary, best);
                 },
                 [&](const Polygon& p) {
                   const auto& v = p.vertices;
                   for (std::size_t i = 0; i < v.size(); ++i) {
                     const Vec2 a = v[i], d = v[(i + 1) % v.size()] - a;
                     const double len = norm(d);
                     const Vec2 n_in = perp(d) / len;
                     if (dot(xi, n_in) >= 0) continue;
                     const double denom = cross(xi, d);
                     if (denom == 0) continue;
                     const double t = cross(a - x, d) / denom;
                     const double s = cross(a - x, xi) / denom;
                     const double slack = tol.corner / len;
                     if (t > tol.boundary && s >= -slack && s <= 1 + slack && t < best.t) {
                       best.t = t;
                       best.component = static_cast<int>(i);
                       best.outward = -n_in;
                       best.edge_param = s;
                       best.edge_length = len;
                     }
                   }
                 },
                 [&](const RadialLayers& l) {
                   for (std::size_t k = 0; k < l.radii.size(); ++k)
                     conic_candidates(l.radii[k], l.radii[k], static_cast<int>(k), x, xi,
                                      tol.boundary, best);
                 },
             },
             domain);

  if (best.component < 0) throw Error(ErrorCode::NoIntersection, "ray does not meet the boundary");
  BoundaryHit hit;
  hit.t = best.t;
  hit.p = x + xi * best.t;
  hit.component = best.component;
  hit.n = dot(xi, best.outward) > 0 ? -best.outward : best.outward;
  if (best.edge_length > 0) {
    const double along = best.edge_param * best.edge_length;
    if (along < tol.corner || best.edge_length - along < tol.corner)
      throw Error(ErrorCode::VertexSingular, "ray runs into a polygon corner");
  }
  if (std::abs(dot(xi, hit.n)) < tol.tangent)
    throw Error(ErrorCode::GrazingHit, "ray meets the boundary tangentially");
  return hit;
}

double ellipse_perimeter(double a, double b) {
  if (a == b) return 2.0 * std::numbers::pi * a;
  auto speed = [&](double u) { return std::hypot(a * std::sin(u), b * std::cos(u)); };
  double err = 0.0;
  const double quarter = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      speed, 0.0, std::numbers::pi / 2, 20, 1e-14, &err);
  return 4.0 * quarter;
}

Metrics metrics(const Domain& domain) {
  constexpr double pi = std::numbers::pi;
  return std::visit(
      overloaded{
          [](const Disk& d) { return Metrics{pi * d.R * d.R, 2 * pi * d.R}; },
          [](const Ellipse& e) { return Metrics{pi * e.a * e.b, ellipse_perimeter(e.a, e.b)}; },
          [](const ConfocalAnnulus& c) {
            return Metrics{pi * (c.a2 * c.b2 - c.a1 * c.b1),
                           ellipse_perimeter(c.a2, c.b2) + ellipse_perimeter(c.a1, c.b1)};
          },
          [](const CircularAnnulus& c) {
            return Metrics{pi * (c.R * c.R - c.r * c.r), 2 * pi * (c.R + c.r)};
          },
          [](const Polygon& p) {
            double per = 0.0;
            for (std::size_t i = 0; i < p.vertices.size(); ++i)
              per += norm(p.vertices[(i + 1) % p.vertices.size()] - p.vertices[i]);
            return Metrics{polygon_signed_area(p.vertices), per};
          },
          [](const RadialLayers& l) {
            const double R = l.radii.front();
            if (l.has_inner_wall()) {
              const double r = l.radii.back();
              return Metrics{pi * (R * R - r * r), 2 * pi * (R + r)};
            }
            return Metrics{pi * R * R, 2 * pi * R};
          },
      },
      domain);
}

}  // namespace billspec
