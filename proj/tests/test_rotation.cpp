#include <cmath>
#include <numbers>

#include "doctest.h"

#include "billspec/billiard.hpp"
#include "billspec/rotation.hpp"

using namespace billspec;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double central_angle(Vec2 a, Vec2 b) {
  double t = std::atan2(cross(a, b), dot(a, b));
  return t < 0 ? t + 2 * kPi : t;
}
}  // namespace

TEST_CASE("flat disk closed form matches the chord geometry") {
  const Domain disk = make_disk(1.0);
  for (double phi : {0.0, 0.2, 0.7, 1.3}) {
    const BoundaryState s = state_from_incidence(disk, 0.3, phi);
    const StepResult r = step(disk, {s.p, s.xi});
    CHECK(f_closed(FlatDisk{1.0, 1.0}, std::sin(phi)) == Approx(central_angle(s.p, r.state.p)).epsilon(1e-12));
  }
  CHECK(f_closed(FlatDisk{1.0, 1.0}, 0.0) == Approx(kPi));
  CHECK(f_closed(FlatDisk{1.0, 1.0}, 1.0) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("closed forms agree with quadrature") {
  const RotationModel models[] = {FlatDisk{1.3, 1.0}, SphericalCut{1.0, 0.8}, Cylinder{1.2, 1.0}};
  for (const auto& m : models) {
    const RadialProfile p = profile_for(m);
    const bool cyl = std::holds_alternative<Cylinder>(m);
    const RotationMode mode = cyl ? RotationMode::HitsInner : RotationMode::Turns;
    RadialProfile q = p;
    if (cyl) q.inner = 0.0;
    const double thr = turning_threshold(m);
    for (double frac : {0.05, 0.3, 0.6, 0.9}) {
      const double eta = frac * thr;
      CHECK(f_numeric(q, eta, mode) == Approx(f_closed(m, eta)).epsilon(1e-8));
    }
  }
}

TEST_CASE("turning radius and threshold") {
  const RadialProfile p = profile_for(FlatDisk{1.3, 1.0});
  CHECK(p.eta0() == Approx(1.0 / 1.3));
  CHECK(turning_threshold(FlatDisk{1.3, 1.0}) == Approx(1.0 / 1.3));
  CHECK(turning_radius(p, 0.5) == Approx(1.3 * 0.5).epsilon(1e-12));
  CHECK_THROWS_AS(turning_radius(p, 0.9), Error);
  CHECK(turning_threshold(SphericalCut{1.0, 0.8}) == Approx(std::sin(0.8) / 0.8));
  CHECK_THROWS_AS(f_closed(FlatDisk{1.3, 1.0}, 0.8), Error);
  CHECK_THROWS_AS(f_closed(Cylinder{1.2, 1.0}, 1.0 / 1.2), Error);
  CHECK_THROWS_AS(f_closed_derivative(FlatDisk{1.0, 1.0}, 1.0), Error);
}

TEST_CASE("derivatives match central differences") {
  const RotationModel models[] = {FlatDisk{1.3, 1.0}, SphericalCut{1.0, 0.8}, Cylinder{1.2, 1.0}};
  for (const auto& m : models) {
    const double thr = turning_threshold(m);
    for (double frac : {-0.5, 0.1, 0.4, 0.8}) {
      const double eta = frac * thr, h = 1e-6;
      const double fd = (f_closed(m, eta + h) - f_closed(m, eta - h)) / (2 * h);
      CHECK(f_closed_derivative(m, eta) == Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("symmetry in eta") {
  const double eta = 0.37;
  CHECK(f_closed(Cylinder{1.2, 1.0}, -eta) == Approx(-f_closed(Cylinder{1.2, 1.0}, eta)));
  const FlatDisk d{1.3, 1.0};
  CHECK(f_closed(d, -eta) + f_closed(d, eta) == Approx(2 * 1.3 * kPi));
  const RadialProfile p = profile_for(SphericalCut{1.0, 0.8});
  CHECK(f_numeric(p, -eta, RotationMode::Turns) == Approx(-f_numeric(p, eta, RotationMode::Turns)));
}

TEST_CASE("layered rotation function") {
  SUBCASE("single layer reduces to the disk") {
    const RadialLayers one{{1.0}, {1.0}};
    for (double eta : {0.0, 0.3, 0.8})
      CHECK(F_multi_annulus(one, eta, {1}) == Approx(f_closed(FlatDisk{1.0, 1.0}, eta)));
  }
  const RadialLayers L{{1.0, 0.7, 0.4}, {1.0, 0.9, 1.2}};
  SUBCASE("crossing segment matches the chord between circles") {
    // a line with impact parameter b < r sweeps acos(b/R) - acos(b/r) between the circles
    const double eta = 0.3, b = eta / 1.0;  // c_0 = 1 so |x cross xi| = eta
    const double R = 1.0, r = 0.7;
    const double expect = std::acos(b / R) - std::acos(b / r);
    CHECK(F_multi_annulus(L, eta, {1, 0, 0}) == Approx(expect));
  }
  SUBCASE("derivative") {
    const std::vector<int> n{3, 2, 1};
    for (double eta : {0.1, 0.3, 0.45}) {
      const double h = 1e-6;
      const double fd = (F_multi_annulus(L, eta + h, n) - F_multi_annulus(L, eta - h, n)) / (2 * h);
      CHECK(dF_deta(L, eta, n) == Approx(fd).epsilon(1e-6));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(F_multi_annulus(L, 0.3, {1, 1}), Error);
    CHECK_THROWS_AS(F_multi_annulus(L, 0.6, {0, 0, 1}), Error);
    try {
      F_multi_annulus(L, 0.6, {0, 0, 1});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InaccessibleLayer);
    }
  }
}

TEST_CASE("empirical rotation on the disk") {
  const Domain disk = make_disk(1.0);
  const BoundaryState s = state_from_incidence(disk, 0.0, 0.4);
  CHECK(rotation_empirical(disk, s, 200) == Approx(f_closed(FlatDisk{1.0, 1.0}, std::sin(0.4))).epsilon(1e-10));
  CHECK_THROWS_AS(rotation_empirical(make_ellipse(2, 1), s, 10), Error);
}
