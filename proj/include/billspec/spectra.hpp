#pragma once

#include <vector>

#include "billspec/parallel.hpp"

namespace billspec {

enum class BoundaryCondition { Dirichlet, Neumann };

enum class BesselKind { J, Y };

/// J_m(x) for x >= 0 or Y_m(x) for x > 0, m >= 0.
double bessel(BesselKind kind, int m, double x);
double bessel_j(int m, double x);
double bessel_y(int m, double x);
/// Derivatives via (C_{m-1} - C_{m+1}) / 2.
double bessel_j_prime(int m, double x);
double bessel_y_prime(int m, double x);

struct Eigenvalue {
  double lambda = 0.0;
  int multiplicity = 1;
  int m = 0;  ///< angular order (disk, annulus) or first lattice index (rectangle)
  int k = 0;  ///< radial index from 1, or second lattice index
};

struct Spectrum {
  std::vector<Eigenvalue> eigenvalues;  ///< sorted by lambda
  double guaranteed_up_to = 0.0;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  /// Set when a root scan had to be refined because two roots shared a cell.
  bool scan_refined = false;
};

Spectrum disk_spectrum(double R, double lambda_max, BoundaryCondition bc,
                       Execution exec = Execution::Parallel);
Spectrum rect_spectrum(double Lx, double Ly, double lambda_max, BoundaryCondition bc);
/// Dirichlet spectrum of { r < |x| < R }.
Spectrum annulus_spectrum(double R, double r, double lambda_max, Execution exec = Execution::Parallel);

/// J_m(k r) Y_m(k R) - J_m(k R) Y_m(k r).
double annulus_cross(int m, double k, double R, double r);

/// #{ lambda_j <= lambda } with multiplicity. Throws SpectrumTruncated
/// above the guaranteed range.
long counting(const Spectrum& spectrum, double lambda);

/// Total number of eigenvalues (with multiplicity) in the list.
long total_count(const Spectrum& spectrum);

}  // namespace billspec
