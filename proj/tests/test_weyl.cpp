#include <cmath>
#include <numbers>

#include "doctest.h"

#include "billspec/weyl.hpp"

using namespace billspec;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("two-term Weyl law") {
  const WeylEstimate d = weyl_two_term(make_disk(1.0), 100.0, BoundaryCondition::Dirichlet);
  CHECK(d.kappa0_term == Approx(25.0));
  CHECK(d.kappa1_term == Approx(-5.0));
  CHECK(d.total() == Approx(20.0));
  const WeylEstimate n = weyl_two_term(make_rectangle(kPi, kPi), 64.0, BoundaryCondition::Neumann);
  CHECK(n.kappa0_term == Approx(kPi * 16.0));
  CHECK(n.kappa1_term == Approx(4 * kPi * 8.0 / (4 * kPi)));
  CHECK_THROWS_AS(weyl_two_term(make_disk(1.0), 0.0, BoundaryCondition::Dirichlet), Error);
}

TEST_CASE("lambda grid") {
  const auto g = lambda_grid(100.0, 103.0, 0.5);
  REQUIRE(g.size() == 7);
  CHECK(g.back() == 103.0);
  CHECK(lambda_grid(1.0, 1.0, 1.0).size() == 1);
  CHECK_THROWS_AS(lambda_grid(1.0, 2.0, 0.0), Error);
  CHECK_THROWS_AS(lambda_grid(2.0, 1.0, 1.0), Error);
}

TEST_CASE("residual series on the square") {
  const Domain sq = make_rectangle(kPi, kPi);
  const Spectrum s = reference_spectrum(sq, 2200.0, BoundaryCondition::Dirichlet);
  const auto grid = lambda_grid(100.0, 2000.0, 1.0);
  const ResidualSeries r = residual_series(sq, s, grid);
  REQUIRE(r.rows.size() == grid.size());
  for (std::size_t i = 0; i < r.rows.size(); i += 97) {
    const auto& row = r.rows[i];
    // lattice count of m^2 + n^2 <= lambda with m, n >= 1
    long brute = 0;
    for (int a = 1; a * a <= row.lambda; ++a)
      for (int b = 1; a * a + b * b <= row.lambda; ++b) ++brute;
    CHECK(row.N == brute);
    CHECK(row.NW == Approx(kPi * row.lambda / 4 - std::sqrt(row.lambda)));
    CHECK(row.R == Approx(row.N - row.NW));
    CHECK(row.Rnorm == Approx(row.R / std::sqrt(row.lambda)));
  }
  // dyadic blocks 100-200, 200-400, 400-800, 800-1600, 1600-3200
  REQUIRE(r.blocks.size() == 5);
  CHECK(r.blocks[0].lo == 100.0);
  CHECK(r.blocks[1].lo == 200.0);
  CHECK(r.blocks[0].count == 101);
  // one-term residual is dominated by the boundary term -sqrt(lambda)
  for (const auto& b : r.blocks) CHECK(b.mean_one_term < 0);
}

TEST_CASE("residuals stay bounded relative to sqrt(lambda)") {
  for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
    const Domain disk = make_disk(1.0);
    const Spectrum s = reference_spectrum(disk, 5500.0, bc);
    const ResidualSeries r = residual_series(disk, s, lambda_grid(100.0, 5000.0, 1.0));
    double worst = 0.0;
    for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.Rnorm));
    CHECK(worst < 1.0);
    const double sign = bc == BoundaryCondition::Dirichlet ? -1.0 : 1.0;
    for (const auto& b : r.blocks) CHECK(sign * b.mean_one_term > 0);
  }
}

TEST_CASE("reference spectra") {
  CHECK_THROWS_AS(reference_spectrum(make_ellipse(2, 1), 100.0, BoundaryCondition::Dirichlet), Error);
  CHECK_THROWS_AS(reference_spectrum(make_circular_annulus(1, 0.5), 100.0, BoundaryCondition::Neumann), Error);
  CHECK_THROWS_AS(reference_spectrum(make_polygon({{0, 0}, {1, 0}, {0, 1}}), 100.0, BoundaryCondition::Dirichlet),
                  Error);
  const Spectrum a = reference_spectrum(make_circular_annulus(1, 0.5), 300.0, BoundaryCondition::Dirichlet);
  CHECK(a.eigenvalues.front().lambda > 30.0);
  const Spectrum shifted =
      reference_spectrum(make_polygon({{1, 1}, {3, 1}, {3, 2}, {1, 2}}), 200.0, BoundaryCondition::Dirichlet);
  CHECK(shifted.eigenvalues.front().lambda == Approx(kPi * kPi * (0.25 + 1.0)));
}

TEST_CASE("block statistics") {
  ResidualSeries s;
  for (double r : {-3.0, 1.0, 2.0, -0.5}) s.rows.push_back({10.0, 0, 0.0, r, r, r});
  const ResidualBlock b = residual_block(s, 5.0, 20.0);
  CHECK(b.count == 4);
  CHECK(b.median_abs_rnorm == Approx(1.5));
  CHECK(b.mean_one_term == Approx(-0.125));
  CHECK(residual_block(s, 50.0, 60.0).count == 0);
}
