#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "billspec/geometry.hpp"
#include "billspec/parallel.hpp"
#include "billspec/spectra.hpp"

namespace billspec {

struct WeylEstimate {
  double kappa0_term = 0.0;  ///< Area lambda / 4 pi
  double kappa1_term = 0.0;  ///< -+ Perimeter sqrt(lambda) / 4 pi
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double lambda = 0.0;

  double total() const { return kappa0_term + kappa1_term; }
};

WeylEstimate weyl_two_term(const Domain& domain, double lambda, BoundaryCondition bc);

struct ResidualRow {
  double lambda = 0.0;
  long N = 0;
  double NW = 0.0;
  double R = 0.0;       ///< N - NW
  double Rnorm = 0.0;   ///< R / sqrt(lambda)
  double R_one = 0.0;   ///< N - kappa0 term
};

struct ResidualBlock {
  double lo = 0.0, hi = 0.0;  ///< [lo, hi)
  std::size_t count = 0;
  double median_abs_rnorm = 0.0;
  double mean_one_term = 0.0;  ///< mean of N - kappa0 term
};

struct ResidualSeries {
  std::vector<ResidualRow> rows;
  std::vector<ResidualBlock> blocks;  ///< dyadic in lambda, from the first grid point
};

/// Evenly spaced grid lo, lo + step, ..., <= hi.
std::vector<double> lambda_grid(double lo, double hi, double step);

ResidualSeries residual_series(const Domain& domain, const Spectrum& spectrum, const std::vector<double>& grid);

/// Block statistics over rows with lambda in [lo, hi].
ResidualBlock residual_block(const ResidualSeries& series, double lo, double hi);

/// Exact spectrum for the reference domains: disk, axis-aligned rectangle
/// (polygon) and circular annulus (Dirichlet only). WrongDomain otherwise.
Spectrum reference_spectrum(const Domain& domain, double lambda_max, BoundaryCondition bc,
                            Execution exec = Execution::Parallel);

// ---- Robin boundary layer ----

/// Half-line model D_1^2 + a' with (D_1 - i beta) u(0) = 0 at one point of
/// the cotangent bundle of the boundary; h = 1 units.
struct RobinLayer {
  double beta = 0.0;
  double a_prime = 0.0;
  double tau = 0.0;
};

/// Normalized surface state sqrt(2 beta) e^{-beta x}; generic in the
/// argument so it can be differentiated with dual numbers.
template <class T>
T robin_bound_state(double beta, const T& x) {
  using std::exp;
  return std::sqrt(2.0 * beta) * exp(-beta * x);
}

inline double robin_bound_energy(const RobinLayer& layer) { return layer.a_prime - layer.beta * layer.beta; }

/// u_b(x1) u_b(y1) when tau >= a' - beta^2, else 0.
double robin_surface_density(const RobinLayer& layer, double x1, double y1);

struct PhaseWindow {
  double x_lo = -1.0, x_hi = 1.0;
  double xi_lo = -1.0, xi_hi = 1.0;
};

using PhaseField = std::function<double(double, double)>;

struct Kappa1Options {
  std::size_t nx = 256, nxi = 256;
  /// Extrapolate from grids n and 2n.
  bool richardson = true;
  /// Cutoff q1 q2; empty means 1 on the window.
  PhaseField cutoff;
  Execution exec = Execution::Parallel;
};

/// (2 pi)^{-1} times the area of { tau1 < a' - beta^2 <= tau2, beta > 0 }
/// weighted by the cutoff. Fields are linearly interpolated on two
/// triangles per grid cell and the region is clipped exactly.
double robin_kappa1(const PhaseField& a_prime, const PhaseField& beta, double tau1, double tau2,
                    const PhaseWindow& window, const Kappa1Options& options = {});

}  // namespace billspec
