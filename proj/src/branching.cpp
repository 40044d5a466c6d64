#include "billspec/billiard.hpp"

#include <cmath>

namespace billspec {

std::optional<Vec2> snell_refract(double c_in, double c_out, Vec2 xi, Vec2 n) {
  const double cos_in = -dot(xi, n);
  Vec2 tangential = xi + n * cos_in;
  const double sin_in = norm(tangential);
  if (sin_in == 0.0) return xi;
  tangential = tangential / sin_in;
  const double sin_out = (c_in / c_out) * sin_in;
  if (sin_out > 1.0) return std::nullopt;
  const double cos_out = std::sqrt((1.0 - sin_out) * (1.0 + sin_out));
  return tangential * sin_out - n * cos_out;
}

double layer_invariant(const RadialLayers& layers, Vec2 x, Vec2 xi, int layer) {
  return layers.speeds[static_cast<std::size_t>(layer)] * cross(x, xi);
}

int layer_of(const RadialLayers& layers, Vec2 x) {
  const double r = norm(x);
  int k = 0;
  while (static_cast<std::size_t>(k) + 1 < layers.layer_count() &&
         r < layers.radii[static_cast<std::size_t>(k) + 1])
    ++k;
  return k;
}

std::vector<BranchSuccessor> branch_step(const RadialLayers& layers, const BoundaryState& incident,
                                         BranchPolicy policy) {
  const int k = incident.component;
  const int from = incident.layer;
  const Vec2 p = incident.p;
  const Vec2 radial = normalized(p);
  // normal facing the incoming side
  const Vec2 n = dot(incident.xi, radial) > 0 ? -radial : radial;
  const bool wall = k == 0 || (layers.has_inner_wall() && static_cast<std::size_t>(k) + 1 == layers.radii.size());

  std::vector<BranchSuccessor> out;
  auto push = [&](Vec2 xi, int layer, bool refracted, bool fallback) {
    BranchSuccessor b;
    b.state.p = p;
    b.state.xi = xi;
    b.state.u = std::atan2(p.y, p.x);
    const double R = layers.radii[static_cast<std::size_t>(k)];
    b.state.eta = dot(p, xi) / (R * R);
    b.state.component = k;
    b.state.layer = layer;
    b.refracted = refracted;
    b.tir_fallback = fallback;
    b.invariant = layer_invariant(layers, p, xi, layer);
    out.push_back(b);
  };

  if (wall || policy == BranchPolicy::Reflect) {
    push(reflect(incident.xi, n), from, false, false);
    return out;
  }
  // moving inward crosses into the next layer, outward into the previous one
  const int to = dot(incident.xi, radial) < 0 ? k : k - 1;
  const double c_in = layers.speeds[static_cast<std::size_t>(from)];
  const double c_out = layers.speeds[static_cast<std::size_t>(to)];
  const auto refracted = snell_refract(c_in, c_out, incident.xi, n);
  if (policy == BranchPolicy::Both) {
    push(reflect(incident.xi, n), from, false, false);
    if (refracted) push(*refracted, to, true, false);
    return out;
  }
  if (refracted) push(*refracted, to, true, false);
  else push(reflect(incident.xi, n), from, false, true);
  return out;
}

std::vector<BranchNode> branch_tree(const RadialLayers& layers, const PhasePoint& z0, int max_depth,
                                    std::size_t max_nodes) {
  const Domain domain = layers;
  std::vector<BranchNode> nodes;
  BranchNode root;
  root.state.p = z0.x;
  root.state.xi = z0.xi;
  root.state.layer = layer_of(layers, z0.x + z0.xi * 1e-9);
  root.state.component = -1;
  nodes.push_back(root);
  for (std::size_t i = 0; i < nodes.size() && nodes.size() < max_nodes; ++i) {
    if (nodes[i].depth >= max_depth) continue;
    const BoundaryState from = nodes[i].state;
    BoundaryHit hit;
    try {
      hit = intersect_ray(domain, from.p, from.xi);
    } catch (const Error&) {
      continue;  // exceptional leaf
    }
    BoundaryState incident;
    incident.p = hit.p;
    incident.xi = from.xi;
    incident.component = hit.component;
    incident.layer = from.layer;
    for (const auto& succ : branch_step(layers, incident, BranchPolicy::Both)) {
      if (nodes.size() >= max_nodes) break;
      nodes.push_back({succ.state, nodes[i].depth + 1, static_cast<int>(i), succ.refracted});
    }
  }
  return nodes;
}

}  // namespace billspec
