#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "billspec/billiard.hpp"
#include "billspec/parallel.hpp"
#include "billspec/rng.hpp"

namespace billspec {

// ---- closed-form rotation functions ----

/// Constant mu, V = alpha^2 on the unit disk.
struct FlatDisk {
  double mu = 1.0;
  double alpha = 1.0;
};

/// Geodesic cap: mu(r) = beta r / sin(beta r), V = alpha^2.
struct SphericalCut {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Slab (-1, 1) x S^1 with constant mu, V = alpha^2; rays cross from one
/// boundary circle to the other.
struct Cylinder {
  double mu = 1.0;
  double alpha = 1.0;
};

using RotationModel = std::variant<FlatDisk, SphericalCut, Cylinder>;

/// Largest |eta| for which the closed form is defined.
double turning_threshold(const RotationModel& model);

/// Central-angle increment between consecutive boundary hits. Principal
/// arcsin branch; throws OutOfRange beyond the turning threshold.
double f_closed(const RotationModel& model, double eta);
double f_closed_derivative(const RotationModel& model, double eta);

// ---- quadrature route ----

enum class ProfileGeometry {
  Polar,  ///< disk-type: angular term mu^2 r^-2 eta^2
  Axial,  ///< cylinder-type: angular term mu^2 eta^2
};

/// Radially symmetric symbol lambda^2 (xi_r^2 + mu^2 w(r) eta^2 - V) / 2
/// with w = r^-2 (Polar) or 1 (Axial). lambda only rescales time and does
/// not enter the rotation function.
struct RadialProfile {
  std::function<double(double)> mu;
  std::function<double(double)> V;
  std::function<double(double)> lambda = [](double) { return 1.0; };
  ProfileGeometry geometry = ProfileGeometry::Polar;
  /// Lower end of the crossing integral in HitsInner mode.
  double inner = 0.0;

  /// sqrt(V(1)) / mu(1): trajectories with |eta| above it never reach r = 1.
  double eta0() const;
};

RadialProfile profile_for(const RotationModel& model);

enum class RotationMode {
  HitsInner,  ///< ray crosses to r = inner (Axial: doubled, covering the slab)
  Turns,      ///< ray turns at r1(eta) and comes back to r = 1
};

/// Largest root in (0, 1) of V(r) - mu(r)^2 w(r) eta^2.
double turning_radius(const RadialProfile& profile, double eta);

/// Quadrature of the increment integral with the endpoint singularity at
/// r1(eta) removed by r = r1 + s^2. Odd in eta.
double f_numeric(const RadialProfile& profile, double eta, RotationMode mode, double rel_tol = 1e-10);

// ---- layered annuli ----

/// Total central-angle increment of a ray with invariant eta having n[k]
/// segments in layer k.
double F_multi_annulus(const RadialLayers& layers, double eta, const std::vector<int>& n);
double dF_deta(const RadialLayers& layers, double eta, const std::vector<int>& n);

/// Mean central-angle advance per boundary-map step along the orbit of s0.
double rotation_empirical(const Domain& domain, const BoundaryState& s0, int bounces);

// ---- periodic-set measures ----

struct RotationProfile {
  std::vector<double> eta;
  std::vector<double> f;
  double min_abs_derivative = 0.0;
  double max_abs_derivative = 0.0;
};

/// Samples f on `count` uniformly spaced points of [lo, hi].
RotationProfile make_rotation_profile(const std::function<double(double)>& f, double lo, double hi,
                                      std::size_t count);

/// Levels 2 pi k / l over reduced fractions with l <= n and 0 <= k <= n.
std::vector<double> rational_levels(int n);

/// Lebesgue measure of { eta : |f(eta) - 2 pi k / l| <= eps for some k, l <= n }
/// for the piecewise-linear interpolant of the sampled profile.
double periodic_measure_1d(const RotationProfile& f, int n, double eps,
                           Execution exec = Execution::Parallel);

/// Same, from a callable on [lo, hi] with a >= 1e5 point base grid;
/// cells that contain a band edge are resampled 32x.
double periodic_measure_1d(const std::function<double(double)>& f, double lo, double hi, int n,
                           double eps, std::size_t grid = 100000, Execution exec = Execution::Parallel);

struct PhaseMeasureEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::int64_t hits = 0;
  std::int64_t exceptional = 0;
};

/// Monte-Carlo fraction of boundary phase points (density |eta| du dv)
/// whose orbit comes back within eps in phase space at some return time
/// in (eps0, T].
PhaseMeasureEstimate near_periodic_phase_measure(const Domain& domain, double T, double eps,
                                                 std::int64_t samples, std::uint64_t seed,
                                                 Execution exec = Execution::Parallel);

/// Boundary state drawn from the invariant measure of the boundary map.
BoundaryState sample_boundary_state(const Domain& domain, CounterRng& rng);

// ---- diophantine diagnostics ----

struct DiophantineReport {
  bool all_decreasing = false;  ///< f_j' <= 0 for every j
  bool all_increasing = false;  ///< f_j' >= 0 for every j
  double min_proxy = 0.0;
  double argmin_eta = 0.0;
  std::vector<int> argmin_n;
  int argmin_q = 0;
  std::string verdict;
};

/// Shared-monotonicity check and a scan of
///   sum_{k < K'} | sum_j n_j f_j^(k)(eta) - 2 pi q [k = 0] |
/// over n_j <= n_max, 1 <= q <= K, with K' = min(K, 3) derivative orders.
DiophantineReport diophantine_check(const std::vector<RotationProfile>& profiles, int n_max, int K);

}  // namespace billspec
