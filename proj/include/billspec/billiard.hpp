#pragma once

#include <optional>
#include <string>
#include <vector>

#include "billspec/geometry.hpp"

namespace billspec {

/// Point of the unit cosphere bundle: position and unit momentum. Flows run
/// with arc-length time, so |xi| = 1 and speed is 1.
struct PhasePoint {
  Vec2 x;
  Vec2 xi;
};

/// State on a boundary component with outgoing (inward-pointing) momentum.
///
/// `u` is the boundary parameter: polar angle on circles, the eccentric
/// anomaly (x1 = a cos u, x2 = b sin u) on ellipses, arc length from the
/// first vertex on polygons. `eta` is the normal-momentum coordinate
/// x1 xi1 / a^2 + x2 xi2 / b^2 of the component (xi . n on polygon edges).
struct BoundaryState {
  Vec2 p;
  double u = 0.0;
  Vec2 xi;
  double eta = 0.0;
  int component = 0;
  int layer = 0;  ///< layer index of the outgoing ray (RadialLayers only)
};

enum class Termination { Completed, Corner, Grazing, Escaped };
std::string_view to_string(Termination t);

/// Action taken when a ray meets an interface of a layered table.
/// Refract means refract-else-reflect (total internal reflection falls back).
enum class BranchPolicy { Reflect, Refract, Both };

struct Segment {
  Vec2 start;
  Vec2 end;
  int layer = 0;
};

struct Bounce {
  Vec2 p;
  Vec2 xi;      ///< outgoing momentum
  double t;     ///< cumulative time at the hit
  int layer;    ///< layer of the outgoing ray
  int component;
};

struct OrbitRecord {
  std::vector<Segment> segments;
  std::vector<Bounce> bounces;
  int bounce_count = 0;
  double total_time = 0.0;
  Termination termination = Termination::Completed;
  std::string diagnostic;
};

enum class CausticClass { ConfocalEllipse, ConfocalHyperbola, ThroughFoci };
std::string_view to_string(CausticClass c);

struct ConicInvariant {
  double beta = 0.0;
  CausticClass caustic = CausticClass::ConfocalEllipse;
};

/// Specular reflection xi - 2 (xi . n) n.
Vec2 reflect(Vec2 xi, Vec2 n);

/// Refracted direction for the law c_in sin(phi_in) = c_out sin(phi_out);
/// nullopt on total internal reflection. `n` faces the incoming side.
std::optional<Vec2> snell_refract(double c_in, double c_out, Vec2 xi, Vec2 n);

/// Builds the state at boundary point p on `component` with outgoing xi.
BoundaryState make_boundary_state(const Domain& domain, Vec2 p, Vec2 xi, int component, int layer = 0);

/// Outer-boundary state at parameter u with momentum (cos v, sin v).
BoundaryState state_from_coordinates(const Domain& domain, double u, double v);

/// Outer-boundary state at parameter u whose momentum makes angle `phi`
/// with the inward normal: xi = cos(phi) n + sin(phi) T, T the
/// counterclockwise unit tangent. Throws OutOfRange unless |phi| <= pi/2.
BoundaryState state_from_incidence(const Domain& domain, double u, double phi);

/// Period of the boundary parameter u on the outer wall.
double parameter_period(const Domain& domain);

struct StepResult {
  BoundaryState state;
  double time = 0.0;
};

/// Free flight to the next boundary hit, then reflection (or refraction for
/// layered tables, per `policy`). Throws GrazingHit / VertexSingular.
StepResult step(const Domain& domain, const PhasePoint& z, BranchPolicy policy = BranchPolicy::Refract);

OrbitRecord orbit(const Domain& domain, const PhasePoint& z0, int max_bounces, double max_time,
                  BranchPolicy policy = BranchPolicy::Refract);

struct ReturnResult {
  BoundaryState state;
  double time = 0.0;
  int intermediate_hits = 0;  ///< hits on components other than the outer wall
  int outer_component = 0;    ///< landing component (edge index for polygons)
  std::vector<Segment> segments;
};

/// First return to the outer boundary. On annuli at most one inner
/// reflection happens in between.
ReturnResult boundary_map(const Domain& domain, const BoundaryState& s,
                          BranchPolicy policy = BranchPolicy::Refract);

/// beta = (x1 xi2 - x2 xi1)^2 - c^2 xi2^2 with c the focal distance of the
/// outer ellipse. Circles have c = 0.
ConicInvariant conic_invariant(const Domain& domain, Vec2 x, Vec2 xi);

/// Unnormalized invariant density |eta| of the boundary map in (u, v).
double measure_density(const BoundaryState& s);

struct JacobianReport {
  Mat2 D;
  double det = 0.0;
  /// det(D) |eta(Phi s)| / |eta(s)|; equals 1 when Phi preserves |eta| du dv.
  double weighted_det = 0.0;
  bool near_circular = false;  ///< (a - b)/a < 1e-3 on an elliptic table
};

/// Central-difference Jacobian of the boundary map in (u, v).
/// Throws ExceptionalSet when a perturbed orbit changes combinatorics or
/// terminates abnormally.
JacobianReport jacobian_boundary_map(const Domain& domain, const BoundaryState& s, double fd_step = 1e-6);

struct IteratedJacobian {
  Mat2 D;
  std::vector<double> norms;  ///< |D Phi^k|_inf for k = 1..n
};

/// Chain-rule product of single-step Jacobians along the orbit of s.
IteratedJacobian jacobian_iterated(const Domain& domain, const BoundaryState& s, int n, double fd_step = 1e-6);

// ---- layered (branching) tables ----

/// c_layer * (x1 xi2 - x2 xi1) = R c sin(phi); conserved along rays and
/// across interfaces.
double layer_invariant(const RadialLayers& layers, Vec2 x, Vec2 xi, int layer);

struct BranchSuccessor {
  BoundaryState state;
  bool refracted = false;
  bool tir_fallback = false;
  double invariant = 0.0;
};

/// Successors of a ray arriving at radius index `incident.component` with
/// incoming momentum `incident.xi` from layer `incident.layer`.
std::vector<BranchSuccessor> branch_step(const RadialLayers& layers, const BoundaryState& incident,
                                         BranchPolicy policy);

struct BranchNode {
  BoundaryState state;
  int depth = 0;
  int parent = -1;
  bool refracted = false;
};

/// Breadth-first tree of branching successors up to `max_depth` hits.
std::vector<BranchNode> branch_tree(const RadialLayers& layers, const PhasePoint& z0, int max_depth,
                                    std::size_t max_nodes = 1 << 16);

/// Layer containing x (the last layer if |x| is below every interface).
int layer_of(const RadialLayers& layers, Vec2 x);

}  // namespace billspec
