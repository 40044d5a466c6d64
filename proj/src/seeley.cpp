#include <algorithm>
#include <cmath>
#include <numbers>

#include "billspec/error.hpp"
#include "billspec/quadrature.hpp"
#include "billspec/rng.hpp"
#include "billspec/seeley.hpp"

namespace billspec {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Circles {
  double outer = 0.0;
  double inner = 0.0;  ///< 0 when there is no inner wall
};

std::optional<Circles> circles_of(const Domain& domain) {
  if (const auto* d = std::get_if<Disk>(&domain)) return Circles{d->R, 0.0};
  if (const auto* a = std::get_if<CircularAnnulus>(&domain)) return Circles{a->R, a->r};
  if (const auto* l = std::get_if<RadialLayers>(&domain))
    return Circles{l->radii.front(), l->has_inner_wall() ? l->radii.back() : 0.0};
  return std::nullopt;
}

struct Interval {
  double lo, hi;
};

// Radial ranges of { d_lo <= dist <= d_hi } for a disk or annulus.
std::vector<Interval> radial_band(const Circles& c, double d_lo, double d_hi) {
  std::vector<Interval> out;
  if (c.inner == 0.0) {
    const double lo = std::max(0.0, c.outer - d_hi), hi = c.outer - d_lo;
    if (hi > lo) out.push_back({lo, hi});
    return out;
  }
  const double mid = 0.5 * (c.outer + c.inner);
  const double ilo = c.inner + d_lo, ihi = std::min(mid, c.inner + d_hi);
  if (ihi > ilo) out.push_back({ilo, ihi});
  const double olo = std::max(mid, c.outer - d_hi), ohi = c.outer - d_lo;
  if (ohi > olo) out.push_back({olo, ohi});
  return out;
}

double annular_area(const std::vector<Interval>& iv) {
  double a = 0.0;
  for (auto [lo, hi] : iv) a += kPi * (hi * hi - lo * lo);
  return a;
}

// First time the ray x + t xi leaves { |y| <= rho_out, |y| >= rho_in }.
double circle_exit(Vec2 x, Vec2 xi, double rho_out, double rho_in) {
  const double b = dot(x, xi), c = dot(x, x);
  double t = -b + std::sqrt(std::max(0.0, b * b - c + rho_out * rho_out));
  if (rho_in > 0) {
    const double disc = b * b - c + rho_in * rho_in;
    if (disc > 0) {
      const double t_in = -b - std::sqrt(disc);
      if (t_in >= 0) t = std::min(t, t_in);
    }
  }
  return std::max(0.0, t);
}

// Sphere tracing against the 1-Lipschitz signed distance.
double traced_exit(const Domain& domain, Vec2 x, Vec2 xi, double level) {
  const double tol = 1e-13 * diameter(domain);
  double t = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const double s = signed_distance(domain, x + t * xi) - level;
    if (s <= tol) return t;
    t += s;
  }
  return t;
}

bool is_convex(const std::vector<Vec2>& v) {
  const auto n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    if (cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]) < 0) return false;
  return true;
}

double shoelace(const std::vector<Vec2>& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) a += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * std::abs(a);
}

// Area of { dist >= s } for a convex CCW polygon: clip by the offset edges.
double convex_inner_area(const std::vector<Vec2>& v, double s) {
  std::vector<Vec2> poly = v;
  const auto n = v.size();
  for (std::size_t i = 0; i < n && poly.size() >= 3; ++i) {
    const Vec2 e = v[(i + 1) % n] - v[i];
    const Vec2 nin = perp(e) / norm(e);
    auto side = [&](Vec2 p) { return dot(nin, p - v[i]) - s; };
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 a = poly[k], b = poly[(k + 1) % poly.size()];
      const double sa = side(a), sb = side(b);
      if (sa >= 0) out.push_back(a);
      if ((sa >= 0) != (sb >= 0)) out.push_back(a + (sa / (sa - sb)) * (b - a));
    }
    poly = std::move(out);
  }
  return poly.size() >= 3 ? shoelace(poly) : 0.0;
}

// Largest rho with f(rho u) >= s on [0, rho_max], f decreasing along the ray.
double ray_level(const std::function<double(double)>& f, double s, double rho_max) {
  if (f(0.0) < s) return 0.0;
  double lo = 0.0, hi = rho_max;
  for (int it = 0; it < 80 && hi - lo > 1e-15 * rho_max; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Area of { dist >= s } for an ellipse or confocal annulus by polar quadrature.
double conic_inner_area(const Domain& domain, double s) {
  Domain outer, inner;
  bool has_inner = false;
  if (const auto* e = std::get_if<Ellipse>(&domain)) {
    outer = *e;
  } else {
    const auto& c = std::get<ConfocalAnnulus>(domain);
    outer = Ellipse{c.a2, c.b2};
    inner = Ellipse{c.a1, c.b1};
    has_inner = true;
  }
  const double a = std::get<Ellipse>(outer).a;
  // the set is empty once s reaches the inradius (the centre is farthest from an ellipse)
  if (!has_inner && signed_distance(outer, {0.0, 0.0}) <= s) return 0.0;
  auto half_rho2 = [&](double th) {
    const Vec2 u{std::cos(th), std::sin(th)};
    const double ro = ray_level([&](double r) { return signed_distance(outer, r * u); }, s, a);
    double ri = 0.0;
    if (has_inner) ri = ray_level([&](double r) { return signed_distance(inner, r * u); }, -s, a);
    return 0.5 * std::max(0.0, ro * ro - ri * ri);
  };
  return 4.0 * integrate(half_rho2, 0.0, 0.5 * kPi, 1e-11).value;
}

// Area of { dist >= s } by a midpoint grid; last resort for nonconvex polygons.
double grid_inner_area(const Domain& domain, double s) {
  const auto& v = std::get<Polygon>(domain).vertices;
  double x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
  for (auto q : v) {
    x0 = std::min(x0, q.x), x1 = std::max(x1, q.x);
    y0 = std::min(y0, q.y), y1 = std::max(y1, q.y);
  }
  constexpr int n = 1500;
  const double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
  long count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (signed_distance(domain, {x0 + (i + 0.5) * hx, y0 + (j + 0.5) * hy}) >= s) ++count;
  return static_cast<double>(count) * hx * hy;
}

double inner_area(const Domain& domain, double s) {
  if (const auto c = circles_of(domain)) return annular_area(radial_band(*c, s, c->outer));
  if (const auto* p = std::get_if<Polygon>(&domain)) {
    if (is_convex(p->vertices)) return convex_inner_area(p->vertices, s);
    return grid_inner_area(domain, s);
  }
  return conic_inner_area(domain, s);
}

struct Stratum {
  double g_lo, g_hi, volume;
  std::int64_t samples;
};

struct Partial {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t count = 0, exceptional = 0;
};

Vec2 sample_point(const Domain& domain, const Stratum& st, CounterRng& rng, double& box_lo_x, double& box_hi_x,
                  double& box_lo_y, double& box_hi_y) {
  if (const auto c = circles_of(domain)) {
    const auto iv = radial_band(*c, 2.0 * st.g_lo, 2.0 * st.g_hi);
    const double total = annular_area(iv);
    double pick = rng.uniform() * total;
    Interval chosen = iv.back();
    for (const auto& r : iv) {
      const double a = kPi * (r.hi * r.hi - r.lo * r.lo);
      if (pick < a) {
        chosen = r;
        break;
      }
      pick -= a;
    }
    const double rho = std::sqrt(chosen.lo * chosen.lo + rng.uniform() * (chosen.hi * chosen.hi - chosen.lo * chosen.lo));
    const double th = 2.0 * kPi * rng.uniform();
    return {rho * std::cos(th), rho * std::sin(th)};
  }
  for (;;) {
    const Vec2 x{box_lo_x + rng.uniform() * (box_hi_x - box_lo_x), box_lo_y + rng.uniform() * (box_hi_y - box_lo_y)};
    const double g = gamma_of(domain, x);
    if (g >= st.g_lo && g <= st.g_hi && signed_distance(domain, x) > 0) return x;
  }
}

void bounding_box(const Domain& domain, double& x0, double& x1, double& y0, double& y1) {
  std::visit(overloaded{
                 [&](const Polygon& p) {
                   x0 = x1 = p.vertices[0].x;
                   y0 = y1 = p.vertices[0].y;
                   for (auto q : p.vertices) {
                     x0 = std::min(x0, q.x), x1 = std::max(x1, q.x);
                     y0 = std::min(y0, q.y), y1 = std::max(y1, q.y);
                   }
                 },
                 [&](const Ellipse& e) { x0 = -e.a, x1 = e.a, y0 = -e.b, y1 = e.b; },
                 [&](const ConfocalAnnulus& c) { x0 = -c.a2, x1 = c.a2, y0 = -c.b2, y1 = c.b2; },
                 [&](const auto&) {
                   const double r = 0.5 * diameter(domain);
                   x0 = y0 = -r;
                   x1 = y1 = r;
                 },
             },
             domain);
}

}  // namespace

double gamma_of(const Domain& domain, Vec2 x) { return 0.5 * std::max(0.0, signed_distance(domain, x)); }

EscapeTimes capped_escape_time(const Domain& domain, const PhasePoint& z, double zeta, double T0) {
  if (!(zeta >= 0) || !(T0 > 0)) throw Error(ErrorCode::ConfigError, "zeta must be >= 0 and T0 > 0");
  if (gamma_of(domain, z.x) < zeta) throw Error(ErrorCode::OutsideZone, "point lies outside X_zeta");
  const Vec2 xi = normalized(z.xi);
  EscapeTimes e;
  const double level = 2.0 * zeta;
  if (const auto c = circles_of(domain)) {
    const double rho_out = c->outer - level;
    const double rho_in = c->inner > 0 ? c->inner + level : 0.0;
    e.T_plus = circle_exit(z.x, xi, rho_out, rho_in);
    e.T_minus = circle_exit(z.x, -1.0 * xi, rho_out, rho_in);
  } else {
    e.T_plus = traced_exit(domain, z.x, xi, level);
    e.T_minus = traced_exit(domain, z.x, -1.0 * xi, level);
  }
  e.T_star = std::min(e.T_plus + e.T_minus, 2.0 * T0);
  return e;
}

double band_volume(const Domain& domain, double g_lo, double g_hi) {
  if (!(g_hi > g_lo) || g_lo < 0) return 0.0;
  if (const auto c = circles_of(domain)) return annular_area(radial_band(*c, 2.0 * g_lo, 2.0 * g_hi));
  return std::max(0.0, inner_area(domain, 2.0 * g_lo) - inner_area(domain, 2.0 * g_hi));
}

double layer_volume(const Domain& domain, double beta) {
  if (!(beta > 0)) throw Error(ErrorCode::OutOfRange, "beta must be positive");
  return band_volume(domain, beta, 2.0 * beta);
}

RemainderReport remainder_integral(const Domain& domain, const ZoneSpec& zone, std::int64_t samples,
                                   std::uint64_t seed, Execution exec) {
  if (!(zone.gamma_min > 0) || zone.gamma_max < zone.gamma_min)
    throw Error(ErrorCode::ConfigError, "zone needs 0 < gamma_min <= gamma_max");
  if (samples < 1) throw Error(ErrorCode::ConfigError, "samples must be positive");
  RemainderReport rep;
  rep.seed = seed;
  rep.zone = zone;
  const double g_sup = 0.5 * inradius(domain);
  const double g_top = std::min(zone.gamma_max, g_sup);
  if (!(g_top > zone.gamma_min)) return rep;

  // dyadic strata, allocation proportional to volume / sqrt(gamma)
  std::vector<Stratum> strata;
  for (double g = zone.gamma_min; g < g_top; g *= 2.0) {
    const double hi = std::min(2.0 * g, g_top);
    const double vol = band_volume(domain, g, hi);
    if (vol > 0) strata.push_back({g, hi, vol, 0});
  }
  if (strata.empty()) return rep;
  std::vector<double> weight(strata.size());
  double wsum = 0.0;
  for (std::size_t j = 0; j < strata.size(); ++j) {
    weight[j] = strata[j].volume / std::sqrt(0.5 * (strata[j].g_lo + strata[j].g_hi));
    wsum += weight[j];
  }
  constexpr std::int64_t kMinPerStratum = 64;
  std::int64_t assigned = 0;
  for (std::size_t j = 0; j < strata.size(); ++j) {
    strata[j].samples = std::max(kMinPerStratum, static_cast<std::int64_t>(static_cast<double>(samples) * weight[j] / wsum));
    assigned += strata[j].samples;
  }
  if (assigned < samples) strata.front().samples += samples - assigned;

  double bx0, bx1, by0, by1;
  bounding_box(domain, bx0, bx1, by0, by1);

  auto value = [&](Vec2 x, Vec2 xi) -> double {
    const double g = gamma_of(domain, x);
    double T = 0.0;
    if (const auto* s = std::get_if<SeeleyRule>(&zone.rule)) {
      T = std::min(std::sqrt(g), std::pow(s->h, -s->delta) * std::pow(g, 1.0 + s->delta));
    } else {
      const auto& r = std::get<EscapeRule>(zone.rule);
      const double zeta = std::visit(overloaded{[&](PowerRule p) { return std::pow(g, 2.0 - p.delta); },
                                                [](FixedZeta f) { return f.zeta; }},
                                     r.zeta);
      T = capped_escape_time(domain, {x, xi}, zeta, std::pow(g, 1.0 - r.delta1)).T_star;
    }
    if (!(T > 0) || !std::isfinite(T)) throw Error(ErrorCode::ExceptionalSet, "degenerate escape time");
    return 1.0 / T;
  };

  // tasks are fixed chunks of each stratum, merged in task order
  constexpr std::int64_t kChunk = 4096;
  struct Task {
    std::size_t stratum;
    std::int64_t begin, end;
  };
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < strata.size(); ++j)
    for (std::int64_t b = 0; b < strata[j].samples; b += kChunk)
      tasks.push_back({j, b, std::min(strata[j].samples, b + kChunk)});
  std::vector<Partial> partial(tasks.size());
  auto run_task = [&](std::size_t ti) {
    const Task& t = tasks[ti];
    const Stratum& st = strata[t.stratum];
    Partial p;
    double x0 = bx0, x1 = bx1, y0 = by0, y1 = by1;
    for (std::int64_t i = t.begin; i < t.end; ++i) {
      CounterRng rng(seed, (static_cast<std::uint64_t>(t.stratum) << 40) + static_cast<std::uint64_t>(i));
      const Vec2 x = sample_point(domain, st, rng, x0, x1, y0, y1);
      const Vec2 xi = unit_from_angle(2.0 * kPi * rng.uniform());
      try {
        const double v = value(x, xi);
        p.sum += v;
        p.sumsq += v * v;
        ++p.count;
      } catch (const Error&) {
        ++p.exceptional;
      }
    }
    partial[ti] = p;
  };
  if (exec == Execution::Parallel) {
    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (std::ptrdiff_t ti = 0; ti < n; ++ti) run_task(static_cast<std::size_t>(ti));
  } else {
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) run_task(ti);
  }

  std::vector<Partial> per_stratum(strata.size());
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    Partial& s = per_stratum[tasks[ti].stratum];
    s.sum += partial[ti].sum;
    s.sumsq += partial[ti].sumsq;
    s.count += partial[ti].count;
    s.exceptional += partial[ti].exceptional;
  }
  double var = 0.0;
  for (std::size_t j = 0; j < strata.size(); ++j) {
    const Partial& s = per_stratum[j];
    rep.samples += s.count + s.exceptional;
    rep.exceptional += s.exceptional;
    if (s.count == 0) continue;
    const double n = static_cast<double>(s.count);
    const double mean = s.sum / n;
    const double sample_var = s.count > 1 ? std::max(0.0, (s.sumsq - n * mean * mean) / (n - 1.0)) : 0.0;
    const double scale = 2.0 * kPi * strata[j].volume;
    rep.estimate += scale * mean;
    var += scale * scale * sample_var / n;
  }
  rep.stderr_ = std::sqrt(var);
  return rep;
}

ModulusReport modulus_integrals(const std::function<double(double)>& nu1, double h, double delta,
                                ModulusKind kind) {
  if (!(h > 0 && h < 1)) throw Error(ErrorCode::ConfigError, "h must lie in (0, 1)");
  if (!(delta > 0 && delta < 1)) throw Error(ErrorCode::ConfigError, "delta must lie in (0, 1)");
  // integrand in u = -log t, where dt / t = du
  auto g = [&](double u) {
    const double t = std::exp(-u);
    const double r = nu1(t) / t;
    return kind == ModulusKind::General ? r : r * r;
  };
  ModulusReport rep;
  const double L = -std::log(h);
  const double a = (1.0 - delta) * L, b = delta * L;  // J in u: [0, b] u [a, L]
  if (b >= a) {
    rep.value_on_J = integrate(g, 0.0, L).value;
  } else {
    rep.value_on_J = integrate(g, 0.0, b).value + integrate(g, a, L).value;
  }
  // dyadic blocks [2^j, 2^{j+1}] in u toward t = 0
  constexpr int kBlocks = 9;
  double sum = 0.0;
  for (int j = 0; j < kBlocks; ++j) {
    const double v = integrate(g, std::ldexp(1.0, j), std::ldexp(1.0, j + 1)).value;
    rep.blocks.push_back(v);
    sum += v;
  }
  const double last = rep.blocks[kBlocks - 1], prev = rep.blocks[kBlocks - 2];
  if (last == 0.0 && prev == 0.0) {
    rep.tail_ratio = 0.0;
  } else {
    rep.tail_ratio = prev > 0 ? last / prev : std::numeric_limits<double>::infinity();
  }
  rep.converges = std::isfinite(rep.tail_ratio) && rep.tail_ratio < 0.95;
  rep.extrapolated = rep.converges ? sum + last * rep.tail_ratio / (1.0 - rep.tail_ratio)
                                   : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace billspec
