#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "billspec/error.hpp"
#include "billspec/spectra.hpp"

namespace billspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Bisection on a sign-change bracket until the width is below 1e-12 in
// absolute terms (or stalls at rounding level).
double refine_root(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (fa < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

struct ScanResult {
  std::vector<double> roots;
  bool refined = false;
};

std::vector<double> scan_once(const std::function<double(double)>& f, double lo, double hi, double step) {
  std::vector<double> roots;
  double a = lo, fa = f(a);
  while (a < hi) {
    const double b = std::min(hi, a + step);
    const double fb = f(b);
    if (fa == 0.0) {
      if (a > lo) roots.push_back(a);
    } else if ((fa < 0) != (fb < 0) && fb != 0.0) {
      roots.push_back(refine_root(f, a, b, fa));
    }
    a = b;
    fa = fb;
  }
  return roots;
}

// Sign-change scan with automatic refinement: the step is halved until the
// root count is stable and no two roots are closer than two cells.
ScanResult scan_roots(const std::function<double(double)>& f, double lo, double hi, double step) {
  ScanResult out;
  out.roots = scan_once(f, lo, hi, step);
  for (int level = 0; level < 8; ++level) {
    bool crowded = false;
    for (std::size_t i = 1; i < out.roots.size(); ++i)
      if (out.roots[i] - out.roots[i - 1] < 2.0 * step) crowded = true;
    const auto finer = scan_once(f, lo, hi, 0.5 * step);
    if (!crowded && finer.size() == out.roots.size()) break;
    out.refined = true;
    out.roots = finer;
    step *= 0.5;
  }
  return out;
}

// Per-order root lists assembled in order, so serial and parallel agree.
template <class PerOrder>
Spectrum assemble(int m_max, PerOrder&& per_order, Execution exec) {
  std::vector<std::vector<Eigenvalue>> by_m(static_cast<std::size_t>(m_max) + 1);
  std::vector<char> refined(by_m.size(), 0);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (int m = 0; m <= m_max; ++m) {
      bool r = false;
      by_m[static_cast<std::size_t>(m)] = per_order(m, r);
      refined[static_cast<std::size_t>(m)] = r;
    }
  } else {
    for (int m = 0; m <= m_max; ++m) {
      bool r = false;
      by_m[static_cast<std::size_t>(m)] = per_order(m, r);
      refined[static_cast<std::size_t>(m)] = r;
    }
  }
  Spectrum s;
  for (std::size_t m = 0; m < by_m.size(); ++m) {
    s.eigenvalues.insert(s.eigenvalues.end(), by_m[m].begin(), by_m[m].end());
    s.scan_refined = s.scan_refined || refined[m];
  }
  return s;
}

void finalize(Spectrum& s, double lambda_max) {
  std::stable_sort(s.eigenvalues.begin(), s.eigenvalues.end(),
                   [](const Eigenvalue& a, const Eigenvalue& b) { return a.lambda < b.lambda; });
  double gap = 0.0;
  const auto n = s.eigenvalues.size();
  for (std::size_t i = n; i-- > 1;) {
    gap = s.eigenvalues[i].lambda - s.eigenvalues[i - 1].lambda;
    if (gap > 0) break;
  }
  s.guaranteed_up_to = lambda_max - gap;
}

}  // namespace

double annulus_cross(int m, double k, double R, double r) {
  const double yr = bessel_y(m, k * r);
  // Y_m(kr) overflows only deep in the evanescent range, where the sign of
  // the cross product is that of J_m(kR).
  if (!std::isfinite(yr)) return bessel_j(m, k * R);
  return bessel_j(m, k * r) * bessel_y(m, k * R) - bessel_j(m, k * R) * yr;
}

Spectrum disk_spectrum(double R, double lambda_max, BoundaryCondition bc, Execution exec) {
  if (!(R > 0)) throw Error(ErrorCode::InvalidDomain, "disk radius must be positive");
  if (!(lambda_max > 0)) throw Error(ErrorCode::ConfigError, "lambda_max must be positive");
  const double x_max = R * std::sqrt(lambda_max);
  // zeros of J_m and J'_m (m >= 1) lie above m
  const int m_max = static_cast<int>(std::ceil(x_max)) + 1;
  auto per_order = [&](int m, bool& refined) {
    std::function<double(double)> f;
    if (bc == BoundaryCondition::Dirichlet) f = [m](double x) { return bessel_j(m, x); };
    else f = [m](double x) { return bessel_j_prime(m, x); };
    const double lo = m == 0 ? 1e-3 : static_cast<double>(m);
    std::vector<Eigenvalue> out;
    if (bc == BoundaryCondition::Neumann && m == 0) out.push_back({0.0, 1, 0, 0});
    if (lo >= x_max) return out;
    const ScanResult sr = scan_roots(f, lo, x_max, 0.5);
    refined = sr.refined;
    int k = bc == BoundaryCondition::Neumann && m == 0 ? 1 : 0;
    for (double x : sr.roots) {
      const double lam = (x / R) * (x / R);
      if (lam <= lambda_max) out.push_back({lam, m == 0 ? 1 : 2, m, ++k});
    }
    return out;
  };
  Spectrum s = assemble(m_max, per_order, exec);
  s.bc = bc;
  finalize(s, lambda_max);
  return s;
}

Spectrum rect_spectrum(double Lx, double Ly, double lambda_max, BoundaryCondition bc) {
  if (!(Lx > 0) || !(Ly > 0)) throw Error(ErrorCode::InvalidDomain, "rectangle sides must be positive");
  if (!(lambda_max > 0)) throw Error(ErrorCode::ConfigError, "lambda_max must be positive");
  Spectrum s;
  s.bc = bc;
  const int first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  const double kx = kPi / Lx, ky = kPi / Ly;
  for (int m = first; (m * kx) * (m * kx) <= lambda_max; ++m)
    for (int n = first; (m * kx) * (m * kx) + (n * ky) * (n * ky) <= lambda_max; ++n)
      s.eigenvalues.push_back({(m * kx) * (m * kx) + (n * ky) * (n * ky), 1, m, n});
  finalize(s, lambda_max);
  return s;
}

Spectrum annulus_spectrum(double R, double r, double lambda_max, Execution exec) {
  if (!(R > r) || !(r > 0)) throw Error(ErrorCode::InvalidDomain, "annulus needs R > r > 0");
  if (!(lambda_max > 0)) throw Error(ErrorCode::ConfigError, "lambda_max must be positive");
  const double k_max = std::sqrt(lambda_max);
  // below k = m / R the radial operator is positive and has no Dirichlet modes
  const int m_max = static_cast<int>(std::ceil(k_max * R)) + 1;
  const double step = kPi / (4.0 * (R - r));
  auto per_order = [&](int m, bool& refined) {
    std::vector<Eigenvalue> out;
    const double lo = std::max(1e-6, m / R);
    if (lo >= k_max) return out;
    const ScanResult sr = scan_roots([&](double k) { return annulus_cross(m, k, R, r); }, lo, k_max, step);
    refined = sr.refined;
    int idx = 0;
    for (double k : sr.roots)
      if (k * k <= lambda_max) out.push_back({k * k, m == 0 ? 1 : 2, m, ++idx});
    return out;
  };
  Spectrum s = assemble(m_max, per_order, exec);
  s.bc = BoundaryCondition::Dirichlet;
  finalize(s, lambda_max);
  return s;
}

long counting(const Spectrum& spectrum, double lambda) {
  if (lambda > spectrum.guaranteed_up_to)
    throw Error(ErrorCode::SpectrumTruncated, "lambda beyond the guaranteed range of the spectrum");
  long n = 0;
  for (const auto& e : spectrum.eigenvalues) {
    if (e.lambda > lambda) break;
    n += e.multiplicity;
  }
  return n;
}

long total_count(const Spectrum& spectrum) {
  long n = 0;
  for (const auto& e : spectrum.eigenvalues) n += e.multiplicity;
  return n;
}

}  // namespace billspec
