// Acceptance checks, one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "billspec/billiard.hpp"
#include "billspec/cli.hpp"
#include "billspec/error.hpp"
#include "billspec/quadrature.hpp"
#include "billspec/rotation.hpp"
#include "billspec/seeley.hpp"
#include "billspec/weyl.hpp"

using namespace billspec;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

// ---------------------------------------------------------------------------
void conic_invariant_conservation() {
  const auto t0 = Clock::now();
  const Domain ell = make_ellipse(2.0, 1.0);
  double worst = 0.0;
  bool caustic_constant = true;
  int orbits = 0;
  for (int i = 0; i < 50; ++i) {
    CounterRng rng(2024, static_cast<std::uint64_t>(i));
    BoundaryState s = sample_boundary_state(ell, rng);
    const ConicInvariant c0 = conic_invariant(ell, s.p, s.xi);
    for (int k = 0; k < 10000; ++k) {
      s = boundary_map(ell, s).state;
      const ConicInvariant c = conic_invariant(ell, s.p, s.xi);
      worst = std::max(worst, std::abs(c.beta - c0.beta) / std::max(std::abs(c0.beta), 1e-12));
      if (c.caustic != c0.caustic) caustic_constant = false;
    }
    ++orbits;
  }
  const double t = seconds_since(t0);
  report(1, orbits == 50 && worst <= 1e-8 && caustic_constant && t < 2.0,
         "ellipse 2x1, 50 x 1e4 bounces: max rel beta drift " + fmt("%.3g", worst) +
             (caustic_constant ? ", caustic class constant" : ", caustic class CHANGED") + fmt(", %.2f s", t));
}

// ---------------------------------------------------------------------------
void measure_preservation() {
  const Domain ann = make_confocal_annulus(2.0, 1.5, 1.5);
  double worst = 0.0;
  int accepted = 0, skipped = 0;
  for (std::uint64_t i = 0; accepted < 100 && i < 10000; ++i) {
    CounterRng rng(77, i);
    const BoundaryState s = sample_boundary_state(ann, rng);
    try {
      const JacobianReport j = jacobian_boundary_map(ann, s, 1e-6);
      worst = std::max(worst, std::abs(j.weighted_det - 1.0));
      ++accepted;
    } catch (const Error&) {
      ++skipped;
    }
  }
  report(2, accepted == 100 && worst <= 1e-5,
         "confocal annulus, " + std::to_string(accepted) + " states (" + std::to_string(skipped) +
             " exceptional skipped): max |det - 1| " + fmt("%.3g", worst));
}

// ---------------------------------------------------------------------------
void rotation_closed_forms() {
  const std::vector<RotationModel> models = {FlatDisk{1.3, 1.0}, SphericalCut{1.0, 0.8}, Cylinder{1.2, 1.0}};
  double worst = 0.0;
  for (const auto& m : models) {
    const RadialProfile prof = profile_for(m);
    const RotationMode mode = std::holds_alternative<Cylinder>(m) ? RotationMode::HitsInner : RotationMode::Turns;
    const double top = 0.95 * turning_threshold(m);
    for (int i = 1; i <= 20; ++i) {
      const double eta = top * i / 20.0;
      worst = std::max(worst, std::abs(f_closed(m, eta) - f_numeric(prof, eta, mode)));
    }
  }
  const Domain disk = make_disk(1.0);
  double worst_emp = 0.0;
  for (double phi : {0.1, 0.4, 0.9, 1.3}) {
    const BoundaryState s = state_from_incidence(disk, 0.3, phi);
    const double eta = std::abs(cross(s.p, s.xi));
    worst_emp = std::max(worst_emp, std::abs(f_closed(FlatDisk{1.0, 1.0}, eta) - rotation_empirical(disk, s, 1000)));
  }
  report(3, worst <= 1e-8 && worst_emp <= 1e-6,
         "closed vs quadrature max " + fmt("%.3g", worst) + ", closed vs empirical (1e3 bounces) max " +
             fmt("%.3g", worst_emp));
}

// ---------------------------------------------------------------------------
void multi_annulus() {
  // c_k R_k = 1, 0.63, 0.48 and c_k r_k = 0.7, 0.36 are pairwise distinct
  const Domain dom = make_radial_layers({1.0, 0.7, 0.4}, {1.0, 0.9, 1.2});
  const auto& layers = std::get<RadialLayers>(dom);
  const double eta0 = 0.3;
  const BoundaryState s0 = state_from_incidence(dom, 0.2, std::asin(eta0));
  const OrbitRecord rec = orbit(dom, {s0.p, s0.xi}, 100000, std::numeric_limits<double>::infinity());
  std::vector<int> n(layers.layer_count(), 0);
  double angle = 0.0, inv_drift = 0.0;
  const double inv0 = layer_invariant(layers, s0.p, s0.xi, 0);
  std::size_t used = 0;
  for (const Segment& seg : rec.segments) {
    if (used == 1000) break;
    ++used;
    ++n[static_cast<std::size_t>(seg.layer)];
    double a = std::atan2(cross(seg.start, seg.end), dot(seg.start, seg.end));
    if (a < 0) a += 2 * kPi;
    angle += a;
    const Vec2 dir = normalized(seg.end - seg.start);
    inv_drift = std::max(inv_drift, std::abs(layer_invariant(layers, seg.start, dir, seg.layer) - inv0));
  }
  const double F = F_multi_annulus(layers, eta0, n);
  const double diff = std::abs(F - angle);

  // derivative blow-up below eta_1 = c_1 R_1 = 0.63 (layer 2 is closed there)
  const std::vector<int> nn = {2, 1, 0};
  const double eta1 = 0.9 * 0.7;
  double numeric = 0.0;
  bool growing = true;
  double prev = 0.0;
  for (int j = 4; j <= 8; ++j) {
    const double e = eta1 - std::pow(10.0, -j);
    const double h = 1e-3 * std::pow(10.0, -j);
    const double d = (F_multi_annulus(layers, e + h, nn) - F_multi_annulus(layers, e - h, nn)) / (2 * h);
    if (std::abs(d) <= prev) growing = false;
    prev = std::abs(d);
    numeric = std::max(numeric, std::abs(d));
  }
  report(4, used == 1000 && n[2] > 0 && diff <= 1e-9 && inv_drift <= 1e-12 && numeric > 1e3 && growing,
         "3 layers, 1000 segments (n = " + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," +
             std::to_string(n[2]) + "): |F - sum| " + fmt("%.3g", diff) + ", invariant drift " +
             fmt("%.3g", inv_drift) + ", max |dF/deta| near c1R1 " + fmt("%.3g", numeric) +
             (growing ? " (increasing)" : " (NOT increasing)"));
}

// ---------------------------------------------------------------------------
struct WeylCase {
  std::string name;
  Domain domain;
};

void two_term_weyl_and_sign() {
  const auto t0 = Clock::now();
  const std::vector<WeylCase> cases = {{"disk", make_disk(1.0)}, {"square", make_rectangle(kPi, kPi)}};
  const auto grid = lambda_grid(100.0, 6400.0, 1.0);
  bool ok5 = true, ok6 = true;
  std::string d5, d6;
  for (const auto& c : cases) {
    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
      const Spectrum spec = reference_spectrum(c.domain, 6800.0, bc);
      const ResidualSeries s = residual_series(c.domain, spec, grid);
      if (bc == BoundaryCondition::Dirichlet) {
        double sup = 0.0;
        for (const auto& r : s.rows) sup = std::max(sup, std::abs(r.Rnorm));
        const double lo = residual_block(s, 100, 400).median_abs_rnorm;
        const double hi = residual_block(s, 1600, 6400).median_abs_rnorm;
        ok5 = ok5 && sup <= 0.5 && hi < lo;
        d5 += c.name + ": sup " + fmt("%.3f", sup) + ", median " + fmt("%.4f", lo) + " -> " + fmt("%.4f", hi) + "; ";
      }
      bool sign_ok = true;
      for (const auto& b : s.blocks)
        sign_ok = sign_ok && (bc == BoundaryCondition::Dirichlet ? b.mean_one_term < 0 : b.mean_one_term > 0);
      ok6 = ok6 && sign_ok && !s.blocks.empty();
      d6 += c.name + (bc == BoundaryCondition::Dirichlet ? " D" : " N") + (sign_ok ? " ok" : " WRONG SIGN") + "; ";
    }
  }
  const double t = seconds_since(t0);
  report(5, ok5 && t < 10.0, d5 + fmt("%.2f s (incl. Neumann spectra)", t));
  report(6, ok6, d6);
}

// ---------------------------------------------------------------------------
// Hyper-dual numbers a + b e1 + c e2 + d e1e2, e1^2 = e2^2 = 0: exact second
// derivatives of analytic expressions.
struct HyperDual {
  double a, b, c, d;
};
HyperDual operator*(double s, HyperDual x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
HyperDual operator*(HyperDual x, HyperDual y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a, x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
}
HyperDual operator-(HyperDual x) { return {-x.a, -x.b, -x.c, -x.d}; }
HyperDual exp(HyperDual x) {
  const double e = std::exp(x.a);
  return {e, e * x.b, e * x.c, e * (x.d + x.b * x.c)};
}

void robin_layer() {
  const RobinLayer layer{0.7, 1.3, 1.0};
  const double norm = integrate([&](double x) { return robin_surface_density(layer, x, x); }, 0.0, 60.0, 1e-13).value;
  const double err_norm = std::abs(norm - 1.0);

  // -u'' + a' u = E u with E = a' - beta^2, and u'(0) = -beta u(0)
  double ode = 0.0;
  const double E = robin_bound_energy(layer);
  for (int i = 0; i < 1000; ++i) {
    const double x = 10.0 * i / 999.0;
    const HyperDual u = robin_bound_state(layer.beta, HyperDual{x, 1.0, 1.0, 0.0});
    ode = std::max(ode, std::abs(-u.d + layer.a_prime * u.a - E * u.a) / std::sqrt(2 * layer.beta));
  }
  const HyperDual u0 = robin_bound_state(layer.beta, HyperDual{0.0, 1.0, 1.0, 0.0});
  const double bc = std::abs(u0.b + layer.beta * u0.a);

  // linear phi = a' - beta^2 and linear beta: the exact region is a polygon
  auto beta = [](double x, double) { return 0.1 * x + 0.02; };
  auto aprime = [&](double x, double xi) { return 0.3 + 0.2 * x + 0.1 * xi + beta(x, xi) * beta(x, xi); };
  const PhaseWindow w{-1.0, 1.0, -1.0, 1.0};
  const double tau1 = 0.25, tau2 = 0.38;
  const double k1 = robin_kappa1(aprime, beta, tau1, tau2, w);
  const int n = 20000;
  const double h = 2.0 / n;
  long inside = 0;
  for (int j = 0; j < n; ++j) {
    const double xi = -1.0 + (j + 0.5) * h;
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + (i + 0.5) * h;
      const double b = 0.1 * x + 0.02;
      const double phi = 0.3 + 0.2 * x + 0.1 * xi;
      if (b > 0 && phi > tau1 && phi <= tau2) ++inside;
    }
  }
  const double brute = static_cast<double>(inside) * h * h / (2 * kPi);
  const double err_k = std::abs(k1 - brute);
  report(7, err_norm <= 1e-10 && ode <= 1e-12 && bc <= 1e-12 && err_k <= 1e-6,
         "norm error " + fmt("%.3g", err_norm) + ", ODE residual " + fmt("%.3g", ode) + ", kappa1 vs brute force " +
             fmt("%.3g", err_k));
}

// ---------------------------------------------------------------------------
void polygon_linear_growth() {
  const Domain sq = make_rectangle(1.0, 1.0);
  const double phi = std::sqrt(2.0) - 1.0;  // irrational slope
  const BoundaryState s = state_from_incidence(sq, 0.3 * std::sqrt(3.0) - 0.25, phi);
  const IteratedJacobian it = jacobian_iterated(sq, s, 200);
  double worst = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = it.norms.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double nk = static_cast<double>(k + 1);
    worst = std::max(worst, it.norms[k] / (1.0 + nk));
    const double lx = std::log(nk), ly = std::log(it.norms[k]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  report(8, n == 200 && worst <= 10.0 && slope <= 1.1,
         "unit square, 200 bounces: sup |DPhi^n|/(1+n) " + fmt("%.3f", worst) + ", log-log slope " + fmt("%.3f", slope));
}

// ---------------------------------------------------------------------------
void seeley_integrals() {
  const Domain disk = make_disk(1.0);
  ZoneSpec zone;
  zone.gamma_min = 0.01;
  zone.gamma_max = 0.5;
  zone.rule = EscapeRule{PowerRule{0.1}, 0.1};
  std::vector<double> est;
  for (std::uint64_t seed : {1u, 2u, 3u}) est.push_back(remainder_integral(disk, zone, 1000000, seed).estimate);
  const auto [mn, mx] = std::minmax_element(est.begin(), est.end());
  const double spread = (*mx - *mn) / *mn;

  double worst_ratio = 0.0;
  const std::vector<Domain> convex = {make_disk(1.0), make_ellipse(2.0, 1.0), make_rectangle(1.0, 1.0),
                                      make_polygon({{0, 0}, {2, 0}, {1.2, 1.1}})};
  for (const auto& d : convex) {
    const double per = metrics(d).perimeter;
    const double bmax = 0.1 * inradius(d);
    for (int i = 1; i <= 10; ++i) {
      const double b = bmax * i / 10.0;
      worst_ratio = std::max(worst_ratio, layer_volume(d, b) / b / per);
    }
  }
  const auto conv = modulus_integrals([](double t) { return t * std::pow(std::abs(std::log(t)), -1.5); }, 1e-3, 0.1,
                                      ModulusKind::General);
  const auto div = modulus_integrals([](double t) { return t; }, 1e-3, 0.1, ModulusKind::General);
  report(9, spread <= 0.05 && worst_ratio <= 3.0 && conv.converges && !div.converges,
         "remainder over 3 seeds " + fmt("%.5g", est[0]) + "/" + fmt("%.5g", est[1]) + "/" + fmt("%.5g", est[2]) +
             " (spread " + fmt("%.2g", spread) + "), max layer_volume/(beta Per) " + fmt("%.3f", worst_ratio) +
             ", t|log t|^-1.5 " + (conv.converges ? "converges" : "diverges") + fmt(" (ratio %.3f)", conv.tail_ratio) +
             ", t " + (div.converges ? "converges" : "diverges") + fmt(" (ratio %.3f)", div.tail_ratio));
}

// ---------------------------------------------------------------------------
void periodic_measure() {
  const FlatDisk model{1.0, 1.0};
  const int n = 10;
  const double eps = 1e-3;
  auto f = [&](double e) { return f_closed(model, e); };
  const double m = periodic_measure_1d(f, 0.0, 1.0, n, eps);
  // f = pi - 2 asin(eta) maps [0, 1] onto [0, pi] with |f'| >= 2
  int reachable = 0;
  for (double L : rational_levels(n))
    if (L + eps >= 0.0 && L - eps <= kPi) ++reachable;
  const double bound = 1.1 * 2.0 * eps * reachable / 2.0;

  const Domain disk = make_disk(1.0);
  std::vector<PhaseMeasureEstimate> a, b;
  for (double e : {1e-1, 1e-2, 1e-3}) {
    a.push_back(near_periodic_phase_measure(disk, 10.0, e, 200000, 11));
    b.push_back(near_periodic_phase_measure(disk, 10.0, e, 200000, 12));
  }
  bool decreasing = true, stable = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0 && !(a[i].estimate < a[i - 1].estimate && b[i].estimate < b[i - 1].estimate)) decreasing = false;
    const double s = std::hypot(a[i].stderr_, b[i].stderr_);
    if (std::abs(a[i].estimate - b[i].estimate) > 3.0 * std::max(s, 1e-300)) stable = false;
  }
  report(10, m <= bound && decreasing && stable,
         "measure_1d " + fmt("%.4g", m) + " <= " + fmt("%.4g", bound) + "; phase measure (eps 1e-1,1e-2,1e-3) " +
             fmt("%.4g", a[0].estimate) + ", " + fmt("%.4g", a[1].estimate) + ", " + fmt("%.4g", a[2].estimate) +
             (decreasing ? " decreasing" : " NOT decreasing") + (stable ? ", seed-stable" : ", NOT seed-stable"));
}

// ---------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "billspec_acceptance";
  fs::create_directories(dir);
  const fs::path disk = dir / "disk.json", ell = dir / "ellipse.json";
  std::ofstream(disk) << R"({"type": "disk", "R": 1})";
  std::ofstream(ell) << R"({"type": "ellipse", "a": 2, "b": 1})";
  const std::vector<std::vector<std::string>> commands = {
      {"--threads", "1", "trace", "--domain", ell.string(), "--bounces", "500", "--seed", "7"},
      {"--threads", "1", "periodic", "--domain", disk.string(), "--samples", "20000", "--seed", "7"},
      {"--threads", "1", "remainder", "--domain", disk.string(), "--samples", "100000", "--seed", "7"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& base : commands) {
    std::string out[2];
    for (int r = 0; r < 2; ++r) {
      const fs::path file = dir / ("run" + std::to_string(r));
      auto args = base;
      args.push_back("-o");
      args.push_back(file.string());
      std::ostringstream so, se;
      const int code = run(args, so, se);
      if (code != 0) ok = false;
      out[r] = slurp(file);
    }
    const bool same = !out[0].empty() && out[0] == out[1];
    ok = ok && same;
    detail += base[2] + (same ? " identical; " : " DIFFERS; ");
  }
  fs::remove_all(dir);
  report(11, ok, detail);
}

}  // namespace

int main() {
  const auto guard = [](int id, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  };
  guard(1, conic_invariant_conservation);
  guard(2, measure_preservation);
  guard(3, rotation_closed_forms);
  guard(4, multi_annulus);
  guard(5, two_term_weyl_and_sign);
  guard(7, robin_layer);
  guard(8, polygon_linear_growth);
  guard(9, seeley_integrals);
  guard(10, periodic_measure);
  guard(11, reproducibility);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
