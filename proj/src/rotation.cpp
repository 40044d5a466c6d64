#include "billspec/rotation.hpp"

#include <cmath>
#include <numbers>

#include "billspec/quadrature.hpp"

namespace billspec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

[[noreturn]] void out_of_range(const std::string& what) { throw Error(ErrorCode::OutOfRange, what); }

double angular_weight(const RadialProfile& p, double r) {
  return p.geometry == ProfileGeometry::Polar ? 1.0 / (r * r) : 1.0;
}

// Radial kinetic term V - mu^2 w eta^2; its zero is the turning radius.
double radial_term(const RadialProfile& p, double r, double eta) {
  const double m = p.mu(r);
  return p.V(r) - m * m * angular_weight(p, r) * eta * eta;
}

}  // namespace

double turning_threshold(const RotationModel& model) {
  return std::visit(overloaded{
                        [](const FlatDisk& m) { return m.alpha / m.mu; },
                        [](const SphericalCut& m) { return m.alpha * std::sin(m.beta) / m.beta; },
                        [](const Cylinder& m) { return m.alpha / m.mu; },
                    },
                    model);
}

double f_closed(const RotationModel& model, double eta) {
  if (std::abs(eta) > turning_threshold(model) ||
      (std::holds_alternative<Cylinder>(model) && std::abs(eta) >= turning_threshold(model)))
    out_of_range("eta beyond the turning threshold of the model");
  return std::visit(overloaded{
                        [&](const FlatDisk& m) {
                          const double arg = std::clamp(m.mu * eta / m.alpha, -1.0, 1.0);
                          return m.mu * kPi - 2.0 * m.mu * std::asin(arg);
                        },
                        [&](const SphericalCut& m) {
                          const double b = m.beta;
                          const double g = b * eta / std::sqrt(m.alpha * m.alpha - b * b * eta * eta) /
                                           std::tan(b);
                          return kPi - 2.0 * std::asin(std::clamp(g, -1.0, 1.0));
                        },
                        [&](const Cylinder& m) {
                          const double mu2 = m.mu * m.mu;
                          return 2.0 * mu2 * eta / std::sqrt(m.alpha * m.alpha - mu2 * eta * eta);
                        },
                    },
                    model);
}

double f_closed_derivative(const RotationModel& model, double eta) {
  if (std::abs(eta) >= turning_threshold(model)) out_of_range("derivative undefined at or beyond the threshold");
  return std::visit(overloaded{
                        [&](const FlatDisk& m) {
                          const double mu2 = m.mu * m.mu;
                          return -2.0 * mu2 / std::sqrt(m.alpha * m.alpha - mu2 * eta * eta);
                        },
                        [&](const SphericalCut& m) {
                          const double b = m.beta, a2 = m.alpha * m.alpha;
                          const double q = a2 - b * b * eta * eta;
                          const double g = b * eta / std::sqrt(q) / std::tan(b);
                          const double dg = b / std::tan(b) * a2 / (q * std::sqrt(q));
                          return -2.0 * dg / std::sqrt(1.0 - g * g);
                        },
                        [&](const Cylinder& m) {
                          const double mu2 = m.mu * m.mu, a2 = m.alpha * m.alpha;
                          const double q = a2 - mu2 * eta * eta;
                          return 2.0 * mu2 * a2 / (q * std::sqrt(q));
                        },
                    },
                    model);
}

double RadialProfile::eta0() const { return std::sqrt(V(1.0)) / mu(1.0); }

RadialProfile profile_for(const RotationModel& model) {
  RadialProfile p;
  std::visit(overloaded{
                 [&](const FlatDisk& m) {
                   p.mu = [mu = m.mu](double) { return mu; };
                   p.V = [a2 = m.alpha * m.alpha](double) { return a2; };
                 },
                 [&](const SphericalCut& m) {
                   p.mu = [b = m.beta](double r) { return b * r / std::sin(b * r); };
                   p.V = [a2 = m.alpha * m.alpha](double) { return a2; };
                 },
                 [&](const Cylinder& m) {
                   p.mu = [mu = m.mu](double) { return mu; };
                   p.V = [a2 = m.alpha * m.alpha](double) { return a2; };
                   p.geometry = ProfileGeometry::Axial;
                 },
             },
             model);
  return p;
}

double turning_radius(const RadialProfile& profile, double eta) {
  if (!(radial_term(profile, 1.0, eta) > 0)) out_of_range("eta beyond the turning threshold eta0");
  constexpr int kScan = 4096;
  double hi = 1.0, lo = -1.0;
  for (int i = 1; i < kScan; ++i) {
    const double r = 1.0 - static_cast<double>(i) / kScan;
    if (radial_term(profile, r, eta) <= 0) {
      lo = r;
      break;
    }
    hi = r;
  }
  if (lo < 0) throw Error(ErrorCode::RootNotBracketed, "no turning point of the radial motion in (0, 1)");
  // bisection to a coarse bracket, then safeguarded Newton
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (radial_term(profile, mid, eta) > 0 ? hi : lo) = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const double h = 1e-7;
    const double fr = radial_term(profile, r, eta);
    const double d = (radial_term(profile, r + h, eta) - radial_term(profile, r - h, eta)) / (2 * h);
    double next = r - fr / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    (radial_term(profile, next, eta) > 0 ? hi : lo) = next;
    if (std::abs(next - r) < 1e-15) {
      r = next;
      break;
    }
    r = next;
  }
  return r;
}

double f_numeric(const RadialProfile& profile, double eta, RotationMode mode, double rel_tol) {
  if (eta < 0) return -f_numeric(profile, -eta, mode, rel_tol);
  const bool polar = profile.geometry == ProfileGeometry::Polar;
  if (eta == 0) {
    if (mode == RotationMode::Turns && polar) return kPi * profile.mu(1e-9);
    return 0.0;
  }
  auto numerator = [&](double r) {
    const double m = profile.mu(r);
    return m * m * angular_weight(profile, r) * eta;
  };

  if (mode == RotationMode::HitsInner) {
    const double lo = profile.inner;
    const double factor = polar ? 1.0 : 2.0;
    constexpr int kCheck = 256;
    for (int i = 0; i <= kCheck; ++i) {
      const double r = lo + (1.0 - lo) * i / kCheck;
      if (polar && r == 0.0) out_of_range("polar crossing integral needs inner > 0");
      if (!(radial_term(profile, r, eta) > 0)) out_of_range("ray turns before reaching the inner boundary");
    }
    const auto q = integrate([&](double r) { return numerator(r) / std::sqrt(radial_term(profile, r, eta)); },
                             lo, 1.0, rel_tol);
    return factor * q.value;
  }

  const double r1 = turning_radius(profile, eta);
  const double h = 1e-6 * std::max(r1, 1e-3);
  const double slope = (radial_term(profile, r1 + h, eta) - radial_term(profile, r1 - h, eta)) / (2 * h);
  auto integrand = [&](double s) {
    const double r = r1 + s * s;
    if (s * s < 1e-10 * std::max(r1, 1e-3)) return 2.0 * numerator(r) / std::sqrt(slope);
    const double d = radial_term(profile, r, eta);
    if (!(d > 0)) return 2.0 * numerator(r) / std::sqrt(slope);
    return 2.0 * s * numerator(r) / std::sqrt(d);
  };
  const auto q = integrate(integrand, 0.0, std::sqrt(1.0 - r1), rel_tol);
  return 2.0 * q.value;
}

double F_multi_annulus(const RadialLayers& layers, double eta, const std::vector<int>& n) {
  if (n.size() != layers.layer_count())
    throw Error(ErrorCode::ConfigError, "segment counts must have one entry per layer");
  const double a = std::abs(eta);
  const double sign = eta < 0 ? -1.0 : 1.0;
  double F = 0.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (n[k] == 0) continue;
    if (n[k] < 0) throw Error(ErrorCode::ConfigError, "segment counts must be nonnegative");
    const double c = layers.speeds[k];
    const double R = layers.outer_radius(k), r = layers.inner_radius(k);
    if (a > c * R) throw Error(ErrorCode::InaccessibleLayer, "layer " + std::to_string(k) + " is not reachable");
    if (r > 0 && a <= c * r) F += n[k] * sign * (std::asin(a / (r * c)) - std::asin(a / (R * c)));
    else F += n[k] * (kPi - 2.0 * sign * std::asin(a / (R * c)));
  }
  return F;
}

double dF_deta(const RadialLayers& layers, double eta, const std::vector<int>& n) {
  if (n.size() != layers.layer_count())
    throw Error(ErrorCode::ConfigError, "segment counts must have one entry per layer");
  const double a = std::abs(eta);
  double d = 0.0;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (n[k] == 0) continue;
    const double c = layers.speeds[k];
    const double R = layers.outer_radius(k), r = layers.inner_radius(k);
    if (a > c * R) throw Error(ErrorCode::InaccessibleLayer, "layer " + std::to_string(k) + " is not reachable");
    const double outer = 1.0 / std::sqrt(R * R * c * c - eta * eta);
    if (r > 0 && a <= c * r) d += n[k] * (1.0 / std::sqrt(r * r * c * c - eta * eta) - outer);
    else d -= 2.0 * n[k] * outer;
  }
  return d;
}

double rotation_empirical(const Domain& domain, const BoundaryState& s0, int bounces) {
  if (!is_circular(domain)) throw Error(ErrorCode::WrongDomain, "empirical rotation needs a circular table");
  if (bounces <= 0) throw Error(ErrorCode::ConfigError, "bounces must be positive");
  const double orientation = cross(s0.p, s0.xi) < 0 ? -1.0 : 1.0;
  BoundaryState s = s0;
  double total = 0.0;
  for (int i = 0; i < bounces; ++i) {
    const ReturnResult r = boundary_map(domain, s);
    for (const Segment& seg : r.segments) {
      double a = orientation * std::atan2(cross(seg.start, seg.end), dot(seg.start, seg.end));
      if (a < 0) a += 2.0 * kPi;
      total += a;
    }
    s = r.state;
  }
  return total / bounces;
}

}  // namespace billspec
