#include <cmath>

#include "doctest.h"

#include "billspec/billiard.hpp"

using namespace billspec;
using doctest::Approx;

namespace {
// angle between the ray and the normal line
double incidence(Vec2 xi, Vec2 n) { return std::acos(std::min(1.0, std::abs(dot(xi, n)))); }
}  // namespace

TEST_CASE("snell law") {
  const Vec2 n{0, 1};  // faces the incoming side (upper half-plane)
  for (double a : {0.1, 0.5, 0.9}) {
    const Vec2 xi{std::sin(a), -std::cos(a)};
    const auto out = snell_refract(1.0, 0.8, xi, n);
    REQUIRE(out.has_value());
    CHECK(norm(*out) == Approx(1.0));
    CHECK(out->y < 0);
    CHECK(1.0 * std::sin(a) == Approx(0.8 * std::sin(incidence(*out, n))));
  }
  SUBCASE("normal incidence passes straight through") {
    const auto out = snell_refract(1.0, 2.0, {0, -1}, n);
    REQUIRE(out.has_value());
    CHECK(out->x == 0.0);
    CHECK(out->y == -1.0);
  }
  SUBCASE("total internal reflection beyond the critical angle") {
    const double crit = std::asin(1.0 / 1.5);
    CHECK(snell_refract(1.5, 1.0, {std::sin(crit - 0.01), -std::cos(crit - 0.01)}, n).has_value());
    CHECK_FALSE(snell_refract(1.5, 1.0, {std::sin(crit + 0.01), -std::cos(crit + 0.01)}, n).has_value());
  }
}

TEST_CASE("layer lookup") {
  const RadialLayers L{{1.0, 0.7, 0.4}, {1.0, 0.9, 1.2}};
  CHECK(layer_of(L, {0.9, 0}) == 0);
  CHECK(layer_of(L, {0, 0.5}) == 1);
  CHECK(layer_of(L, {0.1, 0.1}) == 2);
  CHECK_FALSE(L.has_inner_wall());
  const RadialLayers W{{1.0, 0.6, 0.3}, {1.0, 1.1}};
  CHECK(W.has_inner_wall());
  CHECK(W.inner_radius(1) == 0.3);
}

TEST_CASE("branch step") {
  const RadialLayers L{{1.0, 0.7, 0.4}, {1.0, 0.9, 1.2}};
  const Vec2 p{0.7, 0.0};
  const Vec2 xi = normalized(Vec2{-1.0, 0.4});
  BoundaryState in;
  in.p = p;
  in.xi = xi;
  in.component = 1;
  in.layer = 0;
  const double inv = layer_invariant(L, p, xi, 0);

  SUBCASE("both branches conserve the invariant") {
    const auto succ = branch_step(L, in, BranchPolicy::Both);
    REQUIRE(succ.size() == 2);
    CHECK_FALSE(succ[0].refracted);
    CHECK(succ[0].state.layer == 0);
    CHECK(succ[0].state.xi.x > 0);  // reflected outward
    CHECK(succ[1].refracted);
    CHECK(succ[1].state.layer == 1);
    CHECK(succ[1].state.xi.x < 0);  // continues inward
    for (const auto& s : succ) CHECK(s.invariant == Approx(inv).epsilon(1e-14));
  }
  SUBCASE("reflect policy") {
    const auto succ = branch_step(L, in, BranchPolicy::Reflect);
    REQUIRE(succ.size() == 1);
    CHECK_FALSE(succ[0].refracted);
  }
  SUBCASE("outer wall always reflects") {
    BoundaryState w = in;
    w.p = {1.0, 0.0};
    w.xi = normalized(Vec2{1.0, 0.2});
    w.component = 0;
    const auto succ = branch_step(L, w, BranchPolicy::Both);
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].state.xi.x < 0);
  }
  SUBCASE("grazing entry into a slower layer falls back to reflection") {
    // c sin(phi) is conserved: from c = 1 into c = 0.9 at 0.7 the critical sin is 0.9
    BoundaryState g;
    g.p = {0.7, 0.0};
    g.xi = normalized(Vec2{-0.3, 1.0});
    g.component = 1;
    g.layer = 0;
    const auto succ = branch_step(L, g, BranchPolicy::Refract);
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].tir_fallback);
    CHECK(succ[0].state.layer == 0);
    CHECK(branch_step(L, g, BranchPolicy::Both).size() == 1);
  }
}

TEST_CASE("branch tree") {
  const RadialLayers L{{1.0, 0.7, 0.4}, {1.0, 0.9, 1.2}};
  const Vec2 x{0.95, 0.0};
  const Vec2 xi = normalized(Vec2{-1.0, 0.2});
  const auto nodes = branch_tree(L, {x, xi}, 4);
  const double inv = layer_invariant(L, x, xi, 0);
  std::vector<int> per_depth(5, 0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    ++per_depth[static_cast<std::size_t>(nd.depth)];
    REQUIRE(nd.parent >= 0);
    CHECK(nodes[static_cast<std::size_t>(nd.parent)].depth == nd.depth - 1);
    CHECK(layer_invariant(L, nd.state.p, nd.state.xi, nd.state.layer) == Approx(inv).epsilon(1e-12));
  }
  CHECK(per_depth[1] >= 1);
  for (int d = 1; d <= 4; ++d) CHECK(per_depth[static_cast<std::size_t>(d)] <= (1 << d));
  // the first hit is the interface at 0.7, which splits
  CHECK(per_depth[1] == 2);

  const auto capped = branch_tree(L, {x, xi}, 30, 50);
  CHECK(capped.size() <= 50);
}

TEST_CASE("layered orbit conserves the invariant") {
  const Domain dom = make_radial_layers({1.0, 0.7, 0.4}, {1.0, 0.9, 1.2});
  const auto& L = std::get<RadialLayers>(dom);
  const BoundaryState s0 = state_from_incidence(dom, 0.0, 0.25);
  const OrbitRecord rec = orbit(dom, {s0.p, s0.xi}, 300, 1e9);
  const double inv = layer_invariant(L, s0.p, s0.xi, 0);
  bool inner_seen = false;
  for (const auto& seg : rec.segments) {
    if (norm(seg.end - seg.start) == 0.0) continue;
    inner_seen = inner_seen || seg.layer == 2;
    CHECK(layer_invariant(L, seg.start, normalized(seg.end - seg.start), seg.layer) ==
          Approx(inv).epsilon(1e-11));
    CHECK(norm(seg.start) <= 1.0 + 1e-12);
  }
  CHECK(inner_seen);
}
