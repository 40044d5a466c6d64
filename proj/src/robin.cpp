#include <array>
#include <cmath>
#include <numbers>

#include "billspec/error.hpp"
#include "billspec/weyl.hpp"

namespace billspec {

namespace {

struct Node {
  double x, xi, phi, beta;
};

using Poly = std::vector<Node>;

// Keeps the part of the polygon where s(node) >= 0, interpolating all
// fields linearly along cut edges.
template <class Side>
Poly clip(const Poly& in, Side side) {
  Poly out;
  const auto n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Node& a = in[i];
    const Node& b = in[(i + 1) % n];
    const double sa = side(a), sb = side(b);
    if (sa >= 0) out.push_back(a);
    if ((sa >= 0) != (sb >= 0)) {
      const double t = sa / (sa - sb);
      out.push_back({a.x + t * (b.x - a.x), a.xi + t * (b.xi - a.xi), a.phi + t * (b.phi - a.phi),
                     a.beta + t * (b.beta - a.beta)});
    }
  }
  return out;
}

struct AreaMoment {
  double area, cx, cxi;
};

AreaMoment polygon_moment(const Poly& p) {
  double a2 = 0.0, cx = 0.0, cxi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Node& u = p[i];
    const Node& v = p[(i + 1) % p.size()];
    const double c = u.x * v.xi - v.x * u.xi;
    a2 += c;
    cx += (u.x + v.x) * c;
    cxi += (u.xi + v.xi) * c;
  }
  if (a2 == 0.0) return {0.0, 0.0, 0.0};
  return {0.5 * std::abs(a2), cx / (3.0 * a2), cxi / (3.0 * a2)};
}

double triangle_contribution(const Poly& tri, double tau1, double tau2, const PhaseField& cutoff) {
  Poly p = clip(tri, [](const Node& v) { return v.beta; });
  if (p.size() < 3) return 0.0;
  if (std::isfinite(tau1)) {
    p = clip(p, [tau1](const Node& v) { return v.phi - tau1; });
    if (p.size() < 3) return 0.0;
  }
  if (std::isfinite(tau2)) {
    p = clip(p, [tau2](const Node& v) { return tau2 - v.phi; });
    if (p.size() < 3) return 0.0;
  }
  const AreaMoment m = polygon_moment(p);
  if (m.area == 0.0) return 0.0;
  return cutoff ? m.area * cutoff(m.cx, m.cxi) : m.area;
}

double kappa1_on_grid(const PhaseField& a_prime, const PhaseField& beta, double tau1, double tau2,
                      const PhaseWindow& w, std::size_t nx, std::size_t nxi, const PhaseField& cutoff,
                      Execution exec) {
  const double hx = (w.x_hi - w.x_lo) / static_cast<double>(nx);
  const double hxi = (w.xi_hi - w.xi_lo) / static_cast<double>(nxi);
  auto node = [&](std::size_t i, std::size_t j) {
    const double x = w.x_lo + hx * static_cast<double>(i);
    const double xi = w.xi_lo + hxi * static_cast<double>(j);
    const double b = beta(x, xi);
    return Node{x, xi, a_prime(x, xi) - b * b, b};
  };
  std::vector<double> rows(nxi, 0.0);
  auto do_row = [&](std::size_t j) {
    double s = 0.0;
    Node a = node(0, j), d = node(0, j + 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const Node b = node(i + 1, j), c = node(i + 1, j + 1);
      s += triangle_contribution({a, b, c}, tau1, tau2, cutoff);
      s += triangle_contribution({a, c, d}, tau1, tau2, cutoff);
      a = b;
      d = c;
    }
    rows[j] = s;
  };
  if (exec == Execution::Parallel) {
    const auto n = static_cast<std::ptrdiff_t>(nxi);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
    for (std::ptrdiff_t j = 0; j < n; ++j) do_row(static_cast<std::size_t>(j));
  } else {
    for (std::size_t j = 0; j < nxi; ++j) do_row(j);
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total / (2.0 * std::numbers::pi);
}

}  // namespace

double robin_surface_density(const RobinLayer& layer, double x1, double y1) {
  if (!(layer.beta > 0)) throw Error(ErrorCode::NoSurfaceState, "beta <= 0: no surface state");
  if (layer.tau >= layer.a_prime) throw Error(ErrorCode::OutOfRange, "energy level is not elliptic (tau >= a')");
  if (layer.tau < robin_bound_energy(layer)) return 0.0;
  return robin_bound_state(layer.beta, x1) * robin_bound_state(layer.beta, y1);
}

double robin_kappa1(const PhaseField& a_prime, const PhaseField& beta, double tau1, double tau2,
                    const PhaseWindow& window, const Kappa1Options& options) {
  if (!(window.x_hi > window.x_lo) || !(window.xi_hi > window.xi_lo))
    throw Error(ErrorCode::ConfigError, "empty phase window");
  if (options.nx < 1 || options.nxi < 1) throw Error(ErrorCode::ConfigError, "grid must have cells");
  if (!(tau2 > tau1)) return 0.0;
  const double coarse = kappa1_on_grid(a_prime, beta, tau1, tau2, window, options.nx, options.nxi,
                                       options.cutoff, options.exec);
  if (!options.richardson) return coarse;
  const double fine = kappa1_on_grid(a_prime, beta, tau1, tau2, window, 2 * options.nx, 2 * options.nxi,
                                     options.cutoff, options.exec);
  return fine + (fine - coarse) / 3.0;
}

}  // namespace billspec
