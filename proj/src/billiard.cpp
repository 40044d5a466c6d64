#include "billspec/billiard.hpp"

#include <cmath>
#include <numbers>

namespace billspec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Axes {
  double a, b;
};

// Semi-axes of a conic component; nullopt for polygon edges.
std::optional<Axes> component_axes(const Domain& domain, int component) {
  return std::visit(overloaded{
                        [](const Disk& d) -> std::optional<Axes> { return Axes{d.R, d.R}; },
                        [](const Ellipse& e) -> std::optional<Axes> { return Axes{e.a, e.b}; },
                        [&](const ConfocalAnnulus& c) -> std::optional<Axes> {
                          return component == 0 ? Axes{c.a2, c.b2} : Axes{c.a1, c.b1};
                        },
                        [&](const CircularAnnulus& c) -> std::optional<Axes> {
                          return component == 0 ? Axes{c.R, c.R} : Axes{c.r, c.r};
                        },
                        [](const Polygon&) -> std::optional<Axes> { return std::nullopt; },
                        [&](const RadialLayers& l) -> std::optional<Axes> {
                          const double r = l.radii[static_cast<std::size_t>(component)];
                          return Axes{r, r};
                        },
                    },
                    domain);
}

std::vector<double> cumulative_edge_lengths(const Polygon& p) {
  std::vector<double> cum(p.vertices.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    cum[i + 1] = cum[i] + norm(p.vertices[(i + 1) % p.vertices.size()] - p.vertices[i]);
  return cum;
}

double wrap_pi(double a) {
  a = std::remainder(a, kTwoPi);
  return a;
}

double wrap_period(double a, double period) { return std::remainder(a, period); }

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::Corner: return "Corner";
    case Termination::Grazing: return "Grazing";
    case Termination::Escaped: return "Escaped";
  }
  return "Unknown";
}

std::string_view to_string(CausticClass c) {
  switch (c) {
    case CausticClass::ConfocalEllipse: return "ConfocalEllipse";
    case CausticClass::ConfocalHyperbola: return "ConfocalHyperbola";
    case CausticClass::ThroughFoci: return "ThroughFoci";
  }
  return "Unknown";
}

Vec2 reflect(Vec2 xi, Vec2 n) { return xi - n * (2.0 * dot(xi, n)); }

double parameter_period(const Domain& domain) {
  if (const auto* p = std::get_if<Polygon>(&domain)) return cumulative_edge_lengths(*p).back();
  return kTwoPi;
}

BoundaryState make_boundary_state(const Domain& domain, Vec2 p, Vec2 xi, int component, int layer) {
  BoundaryState s;
  s.p = p;
  s.xi = xi;
  s.component = component;
  s.layer = layer;
  if (const auto axes = component_axes(domain, component)) {
    s.u = std::atan2(p.y / axes->b, p.x / axes->a);
    s.eta = p.x * xi.x / (axes->a * axes->a) + p.y * xi.y / (axes->b * axes->b);
  } else {
    const auto& poly = std::get<Polygon>(domain);
    const auto cum = cumulative_edge_lengths(poly);
    const auto i = static_cast<std::size_t>(component);
    const Vec2 a = poly.vertices[i], b = poly.vertices[(i + 1) % poly.vertices.size()];
    s.u = cum[i] + norm(p - a);
    s.eta = dot(xi, normalized(perp(b - a)));
  }
  return s;
}

BoundaryState state_from_incidence(const Domain& domain, double u, double phi) {
  if (!(std::abs(phi) <= std::numbers::pi / 2))
    throw Error(ErrorCode::OutOfRange, "incidence angle must lie in [-pi/2, pi/2]");
  BoundaryState s = state_from_coordinates(domain, u, 0.0);
  const Vec2 n = boundary_normal(domain, s.p);
  const Vec2 T = -perp(n);  // counterclockwise tangent for an inward normal
  return make_boundary_state(domain, s.p, n * std::cos(phi) + T * std::sin(phi), s.component,
                             s.layer);
}

BoundaryState state_from_coordinates(const Domain& domain, double u, double v) {
  const Vec2 xi = unit_from_angle(v);
  if (const auto* poly = std::get_if<Polygon>(&domain)) {
    const auto cum = cumulative_edge_lengths(*poly);
    const double per = cum.back();
    double w = std::fmod(u, per);
    if (w < 0) w += per;
    std::size_t i = 0;
    while (i + 1 < poly->vertices.size() && w >= cum[i + 1]) ++i;
    const Vec2 a = poly->vertices[i], b = poly->vertices[(i + 1) % poly->vertices.size()];
    const Vec2 p = a + normalized(b - a) * (w - cum[i]);
    BoundaryState s = make_boundary_state(domain, p, xi, static_cast<int>(i));
    s.u = w;
    return s;
  }
  const auto axes = component_axes(domain, 0);
  const Vec2 p{axes->a * std::cos(u), axes->b * std::sin(u)};
  BoundaryState s = make_boundary_state(domain, p, xi, 0, 0);
  s.u = u;
  return s;
}

StepResult step(const Domain& domain, const PhasePoint& z, BranchPolicy policy) {
  const BoundaryHit hit = intersect_ray(domain, z.x, z.xi);
  StepResult r;
  r.time = hit.t;
  if (const auto* layers = std::get_if<RadialLayers>(&domain)) {
    BoundaryState incident;
    incident.p = hit.p;
    incident.xi = z.xi;
    incident.component = hit.component;
    incident.layer = layer_of(*layers, z.x + z.xi * (0.5 * hit.t));
    auto next = branch_step(*layers, incident, policy == BranchPolicy::Both ? BranchPolicy::Refract : policy);
    r.state = next.front().state;
    return r;
  }
  r.state = make_boundary_state(domain, hit.p, reflect(z.xi, hit.n), hit.component);
  return r;
}

OrbitRecord orbit(const Domain& domain, const PhasePoint& z0, int max_bounces, double max_time,
                  BranchPolicy policy) {
  OrbitRecord rec;
  PhasePoint z = z0;
  const auto* layers = std::get_if<RadialLayers>(&domain);
  int layer = layers ? layer_of(*layers, z.x + z.xi * 1e-9) : 0;
  while (rec.bounce_count < max_bounces) {
    StepResult s;
    try {
      s = step(domain, z, policy);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::VertexSingular) rec.termination = Termination::Corner;
      else if (e.code() == ErrorCode::GrazingHit) rec.termination = Termination::Grazing;
      else if (e.code() == ErrorCode::NoIntersection) rec.termination = Termination::Escaped;
      else throw;
      rec.diagnostic = e.what();
      return rec;
    }
    if (rec.total_time + s.time > max_time) {
      const double rest = max_time - rec.total_time;
      rec.segments.push_back({z.x, z.x + z.xi * rest, layer});
      rec.total_time = max_time;
      return rec;
    }
    rec.segments.push_back({z.x, s.state.p, layer});
    rec.total_time += s.time;
    ++rec.bounce_count;
    layer = s.state.layer;
    rec.bounces.push_back({s.state.p, s.state.xi, rec.total_time, layer, s.state.component});
    z = {s.state.p, s.state.xi};
  }
  return rec;
}

ReturnResult boundary_map(const Domain& domain, const BoundaryState& s, BranchPolicy policy) {
  ReturnResult out;
  PhasePoint z{s.p, s.xi};
  const bool polygon = std::holds_alternative<Polygon>(domain);
  const auto* layers = std::get_if<RadialLayers>(&domain);
  int layer = layers ? s.layer : 0;
  constexpr int kMaxHits = 100000;
  for (int hits = 0; hits < kMaxHits; ++hits) {
    const StepResult r = step(domain, z, policy);
    out.time += r.time;
    out.segments.push_back({z.x, r.state.p, layer});
    layer = r.state.layer;
    if (polygon || r.state.component == 0) {
      out.state = r.state;
      out.outer_component = r.state.component;
      return out;
    }
    ++out.intermediate_hits;
    z = {r.state.p, r.state.xi};
  }
  throw Error(ErrorCode::ExceptionalSet, "ray never returned to the outer boundary");
}

ConicInvariant conic_invariant(const Domain& domain, Vec2 x, Vec2 xi) {
  double a = 0.0, b = 0.0;
  std::visit(overloaded{
                 [&](const Disk& d) { a = b = d.R; },
                 [&](const Ellipse& e) { a = e.a, b = e.b; },
                 [&](const ConfocalAnnulus& c) { a = c.a2, b = c.b2; },
                 [&](const CircularAnnulus& c) { a = b = c.R; },
                 [](const Polygon&) {
                   throw Error(ErrorCode::WrongDomain, "conic invariant needs an elliptic table");
                 },
                 [](const RadialLayers&) {
                   throw Error(ErrorCode::WrongDomain, "conic invariant needs an elliptic table");
                 },
             },
             domain);
  const double c2 = a * a - b * b;
  const double w = cross(x, xi);
  ConicInvariant inv;
  inv.beta = w * w - c2 * xi.y * xi.y;
  const double band = 1e-12 * a * a;
  if (std::abs(inv.beta) <= band) inv.caustic = CausticClass::ThroughFoci;
  else inv.caustic = inv.beta > 0 ? CausticClass::ConfocalEllipse : CausticClass::ConfocalHyperbola;
  return inv;
}

double measure_density(const BoundaryState& s) { return std::abs(s.eta); }

JacobianReport jacobian_boundary_map(const Domain& domain, const BoundaryState& s, double fd_step) {
  const double period = parameter_period(domain);
  const double v0 = angle_of(s.xi);
  const double h = fd_step;

  struct Sample {
    double u, v;
    int hits, landing;
    double eta;
  };
  auto run = [&](double u, double v) {
    const BoundaryState st = state_from_coordinates(domain, u, v);
    try {
      const ReturnResult r = boundary_map(domain, st);
      return Sample{r.state.u, angle_of(r.state.xi), r.intermediate_hits, r.outer_component, r.state.eta};
    } catch (const Error& e) {
      throw Error(ErrorCode::ExceptionalSet, std::string("perturbed orbit terminated: ") + e.what());
    }
  };

  const Sample base = run(s.u, v0);
  const Sample up = run(s.u + h, v0), um = run(s.u - h, v0);
  const Sample vp = run(s.u, v0 + h), vm = run(s.u, v0 - h);
  for (const Sample* q : {&up, &um, &vp, &vm}) {
    if (q->hits != base.hits || q->landing != base.landing)
      throw Error(ErrorCode::ExceptionalSet, "perturbation crosses a discontinuity of the boundary map");
  }

  JacobianReport rep;
  rep.D(0, 0) = wrap_period(up.u - um.u, period) / (2 * h);
  rep.D(1, 0) = wrap_pi(up.v - um.v) / (2 * h);
  rep.D(0, 1) = wrap_period(vp.u - vm.u, period) / (2 * h);
  rep.D(1, 1) = wrap_pi(vp.v - vm.v) / (2 * h);
  rep.det = rep.D.det();
  const double eta_in = std::abs(state_from_coordinates(domain, s.u, v0).eta);
  rep.weighted_det = rep.det * std::abs(base.eta) / eta_in;
  if (const auto* e = std::get_if<Ellipse>(&domain)) rep.near_circular = (e->a - e->b) / e->a < 1e-3;
  if (const auto* c = std::get_if<ConfocalAnnulus>(&domain))
    rep.near_circular = (c->a2 - c->b2) / c->a2 < 1e-3;
  return rep;
}

IteratedJacobian jacobian_iterated(const Domain& domain, const BoundaryState& s, int n, double fd_step) {
  IteratedJacobian out;
  BoundaryState cur = s;
  for (int k = 0; k < n; ++k) {
    const JacobianReport j = jacobian_boundary_map(domain, cur, fd_step);
    out.D = j.D * out.D;
    out.norms.push_back(out.D.norm_inf());
    cur = boundary_map(domain, cur).state;
  }
  return out;
}

}  // namespace billspec
