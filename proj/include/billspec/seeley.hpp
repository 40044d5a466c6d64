#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "billspec/billiard.hpp"
#include "billspec/parallel.hpp"

namespace billspec {

/// Half the distance to the boundary; 0 on and outside it.
double gamma_of(const Domain& domain, Vec2 x);

struct EscapeTimes {
  double T_plus = 0.0;
  double T_minus = 0.0;
  double T_star = 0.0;
};

/// Straight-line times for which x +- t xi stays in X_zeta = { gamma >= zeta },
/// and T* = min(T+ + T-, 2 T0). Throws OutsideZone if gamma(x) < zeta.
EscapeTimes capped_escape_time(const Domain& domain, const PhasePoint& z, double zeta, double T0);

/// zeta(gamma) = gamma^{2 - delta}
struct PowerRule {
  double delta = 0.1;
};
struct FixedZeta {
  double zeta = 0.0;
};
using ZetaRule = std::variant<PowerRule, FixedZeta>;

/// Capped escape time, T0 = gamma^{1 - delta1}.
struct EscapeRule {
  ZetaRule zeta = PowerRule{};
  double delta1 = 0.1;
};
/// Smooth-boundary heuristic T = min(gamma^{1/2}, h^{-delta} gamma^{1 + delta}).
struct SeeleyRule {
  double h = 1e-2;
  double delta = 0.1;
};
using TimeRule = std::variant<EscapeRule, SeeleyRule>;

struct ZoneSpec {
  double gamma_min = 0.01;
  double gamma_max = 0.5;
  TimeRule rule = EscapeRule{};
};

struct RemainderReport {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::int64_t samples = 0;
  std::int64_t exceptional = 0;
  std::uint64_t seed = 0;
  ZoneSpec zone;
};

/// Monte-Carlo value of the integral of 1/T over { gamma_min <= gamma <= gamma_max }
/// times the unit circle of directions (measure 2 pi area), stratified in
/// dyadic gamma layers. Each layer draws from its own counter stream.
RemainderReport remainder_integral(const Domain& domain, const ZoneSpec& zone, std::int64_t samples,
                                   std::uint64_t seed, Execution exec = Execution::Parallel);

/// Area of { g_lo <= gamma <= g_hi }.
double band_volume(const Domain& domain, double g_lo, double g_hi);
/// Area of X_(beta) = { beta <= gamma <= 2 beta }.
double layer_volume(const Domain& domain, double beta);

enum class ModulusKind {
  General,      ///< nu(t) / t^2
  Schrodinger,  ///< nu(t)^2 / t^3
};

struct ModulusReport {
  double value_on_J = 0.0;  ///< J = [h, h^{1-delta}] u [h^delta, 1]
  bool converges = false;   ///< verdict for the integral down to t = 0
  double tail_ratio = 0.0;  ///< ratio of the last two dyadic blocks in u = -log t
  double extrapolated = 0.0;  ///< integral over (0, e^{-1}] when convergent
  std::vector<double> blocks;
};

ModulusReport modulus_integrals(const std::function<double(double)>& nu1, double h, double delta,
                                ModulusKind kind);

}  // namespace billspec
