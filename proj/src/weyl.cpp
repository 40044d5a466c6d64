#include <algorithm>
#include <cmath>
#include <numbers>

#include "billspec/error.hpp"
#include "billspec/weyl.hpp"

namespace billspec {

namespace {
constexpr double kPi = std::numbers::pi;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}
}  // namespace

WeylEstimate weyl_two_term(const Domain& domain, double lambda, BoundaryCondition bc) {
  if (!(lambda > 0)) throw Error(ErrorCode::OutOfRange, "lambda must be positive");
  const Metrics m = metrics(domain);
  WeylEstimate w;
  w.lambda = lambda;
  w.bc = bc;
  w.kappa0_term = m.area * lambda / (4.0 * kPi);
  const double k1 = m.perimeter * std::sqrt(lambda) / (4.0 * kPi);
  w.kappa1_term = bc == BoundaryCondition::Dirichlet ? -k1 : k1;
  return w;
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw Error(ErrorCode::ConfigError, "grid needs step > 0 and hi >= lo");
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) g.push_back(lo + step * static_cast<double>(i));
  return g;
}

ResidualSeries residual_series(const Domain& domain, const Spectrum& spectrum, const std::vector<double>& grid) {
  ResidualSeries out;
  for (double lam : grid) {
    ResidualRow row;
    row.lambda = lam;
    row.N = counting(spectrum, lam);
    if (lam > 0) {
      const WeylEstimate w = weyl_two_term(domain, lam, spectrum.bc);
      row.NW = w.total();
      row.R = static_cast<double>(row.N) - row.NW;
      row.Rnorm = row.R / std::sqrt(lam);
      row.R_one = static_cast<double>(row.N) - w.kappa0_term;
    } else {
      row.R = static_cast<double>(row.N);
      row.R_one = row.R;
    }
    out.rows.push_back(row);
  }
  if (!grid.empty() && grid.front() > 0) {
    const double last = *std::max_element(grid.begin(), grid.end());
    for (double lo = grid.front(); lo <= last; lo *= 2.0) {
      ResidualBlock b = residual_block(out, lo, 2.0 * lo);
      b.hi = 2.0 * lo;
      if (b.count > 0) out.blocks.push_back(b);
    }
  }
  return out;
}

ResidualBlock residual_block(const ResidualSeries& series, double lo, double hi) {
  ResidualBlock b;
  b.lo = lo;
  b.hi = hi;
  std::vector<double> abs_r;
  double sum = 0.0;
  for (const auto& r : series.rows) {
    if (r.lambda < lo || r.lambda > hi) continue;
    abs_r.push_back(std::abs(r.Rnorm));
    sum += r.R_one;
  }
  b.count = abs_r.size();
  if (b.count) {
    b.median_abs_rnorm = median(std::move(abs_r));
    b.mean_one_term = sum / static_cast<double>(b.count);
  }
  return b;
}

Spectrum reference_spectrum(const Domain& domain, double lambda_max, BoundaryCondition bc, Execution exec) {
  if (const auto* d = std::get_if<Disk>(&domain)) return disk_spectrum(d->R, lambda_max, bc, exec);
  if (const auto* a = std::get_if<CircularAnnulus>(&domain)) {
    if (bc != BoundaryCondition::Dirichlet)
      throw Error(ErrorCode::WrongDomain, "annulus spectrum is available for Dirichlet only");
    return annulus_spectrum(a->R, a->r, lambda_max, exec);
  }
  if (const auto* p = std::get_if<Polygon>(&domain)) {
    const auto& v = p->vertices;
    if (v.size() == 4) {
      double x0 = v[0].x, x1 = v[0].x, y0 = v[0].y, y1 = v[0].y;
      for (auto q : v) {
        x0 = std::min(x0, q.x), x1 = std::max(x1, q.x);
        y0 = std::min(y0, q.y), y1 = std::max(y1, q.y);
      }
      bool axis_aligned = true;
      for (auto q : v)
        axis_aligned = axis_aligned && (q.x == x0 || q.x == x1) && (q.y == y0 || q.y == y1);
      if (axis_aligned) return rect_spectrum(x1 - x0, y1 - y0, lambda_max, bc);
    }
  }
  throw Error(ErrorCode::WrongDomain, "no exact spectrum for this domain");
}

}  // namespace billspec
