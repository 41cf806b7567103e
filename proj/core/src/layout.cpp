#include "grex/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "graph_access.hpp"
#include "grex/error.hpp"
#include "hashing.hpp"

namespace grex {

void LayoutParams::validate() const {
  const bool ok = area_width > 0.0 && area_height > 0.0 && c_constant > 0.0 &&
                  initial_temperature > 0.0 && cooling > 0.0 && cooling < 1.0 &&
                  min_temperature >= 0.0 && min_separation > 0.0 && std::isfinite(area_width) &&
                  std::isfinite(area_height) && std::isfinite(initial_temperature);
  if (!ok) {
    throw Error(ErrorKind::InvalidArgument, "layout parameters out of range");
  }
}

Point seeded_position(const NodeId& id, const LayoutParams& params) {
  const std::uint64_t h1 = detail::splitmix64(params.seed ^ detail::fnv1a(id.str()));
  const std::uint64_t h2 = detail::splitmix64(h1);
  return {detail::unit_interval(h1) * params.area_width,
          detail::unit_interval(h2) * params.area_height};
}

LayoutState seed_positions(const std::set<NodeId>& ids, const LayoutParams& params) {
  params.validate();
  LayoutState state;
  state.temperature = params.initial_temperature;
  for (const NodeId& id : ids) {
    state.positions.emplace_hint(state.positions.end(), id, seeded_position(id, params));
  }
  return state;
}

namespace {

// Unit vector used to separate a coincident pair; `a` is pushed along it and
// `b` the opposite way.
Point separation_direction(const NodeId& a, const NodeId& b, std::uint64_t seed) {
  std::uint64_t h = seed ^ detail::fnv1a(a.str());
  h = detail::splitmix64(h) ^ detail::fnv1a(b.str());
  const double angle = detail::unit_interval(detail::splitmix64(h)) * 2.0 * std::numbers::pi;
  return {std::cos(angle), std::sin(angle)};
}

double cooled(double temperature, const LayoutParams& params) {
  const double next = temperature * params.cooling;
  return next < params.min_temperature ? std::min(temperature, params.min_temperature) : next;
}

}  // namespace

LayoutState step(const Graph& graph, const std::set<NodeId>& visible, const LayoutState& state,
                 const LayoutParams& params) {
  params.validate();
  const std::size_t n = visible.size();
  std::vector<const NodeId*> ids;
  std::vector<double> px, py;
  ids.reserve(n);
  px.reserve(n);
  py.reserve(n);
  constexpr std::size_t kHidden = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(graph.node_count(), kHidden);
  for (const NodeId& id : visible) {
    auto it = state.positions.find(id);
    if (it == state.positions.end()) {
      throw Error(ErrorKind::MissingPosition, id.str());
    }
    slot[detail::GraphAccess::index(graph, id)] = ids.size();
    ids.push_back(&id);
    px.push_back(it->second.x);
    py.push_back(it->second.y);
  }

  LayoutState next = state;
  next.temperature = cooled(state.temperature, params);
  next.iteration = state.iteration + 1;
  if (n < 2) {
    return next;
  }

  const double k = params.c_constant * std::sqrt(params.area_width * params.area_height /
                                                 static_cast<double>(n));
  const double k2 = k * k;
  const double min_sep = params.min_separation;
  const double min_sep2 = min_sep * min_sep;
  std::vector<double> dx(n, 0.0), dy(n, 0.0);

  // Exact O(n^2) repulsion in fixed pair order. The force k^2/d along the
  // unit vector is delta * k^2/d^2, which needs no square root. A
  // Barnes-Hut style approximation would slot in here for much larger
  // visible sets.
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = px[i];
    const double yi = py[i];
    double fx = 0.0;
    double fy = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double ux = xi - px[j];
      const double uy = yi - py[j];
      const double d2 = ux * ux + uy * uy;
      double gx, gy;
      if (d2 < min_sep2) {
        const Point dir = separation_direction(*ids[i], *ids[j], params.seed);
        const double f = k2 / min_sep;
        gx = dir.x * f;
        gy = dir.y * f;
      } else {
        const double s = k2 / d2;
        gx = ux * s;
        gy = uy * s;
      }
      fx += gx;
      fy += gy;
      dx[j] -= gx;
      dy[j] -= gy;
    }
    dx[i] += fx;
    dy[i] += fy;
  }

  const auto ends = detail::GraphAccess::endpoints(graph);
  for (const auto& [s, t] : ends) {
    const std::size_t i = slot[s];
    const std::size_t j = slot[t];
    if (i == kHidden || j == kHidden || i == j) continue;
    const double ux = px[i] - px[j];
    const double uy = py[i] - py[j];
    const double dist = std::sqrt(ux * ux + uy * uy);
    if (dist < min_sep) continue;
    // (delta / dist) * dist^2 / k
    const double scale = dist / k;
    dx[i] -= ux * scale;
    dy[i] -= uy * scale;
    dx[j] += ux * scale;
    dy[j] += uy * scale;
  }

  const double limit = state.temperature;
  for (std::size_t i = 0; i < n; ++i) {
    if (state.pinned.count(*ids[i]) != 0) continue;
    const double len = std::hypot(dx[i], dy[i]);
    if (!(len > 0.0) || !std::isfinite(len)) continue;
    const double move = std::min(len, limit) / len;
    Point& p = next.positions.at(*ids[i]);
    p.x = std::clamp(px[i] + dx[i] * move, 0.0, params.area_width);
    p.y = std::clamp(py[i] + dy[i] * move, 0.0, params.area_height);
  }
  return next;
}

LayoutState run(const Graph& graph, const std::set<NodeId>& visible, LayoutState state,
                const LayoutParams& params, std::uint64_t iterations, const LayoutObserver& observer) {
  for (std::uint64_t i = 0; i < iterations; ++i) {
    state = step(graph, visible, state, params);
    if (observer && !observer(state)) break;
  }
  return state;
}

LayoutState pin(LayoutState state, const NodeId& id) {
  if (state.positions.count(id) == 0) {
    throw Error(ErrorKind::MissingPosition, id.str());
  }
  state.pinned.insert(id);
  return state;
}

LayoutState unpin(LayoutState state, const NodeId& id) {
  if (state.positions.count(id) == 0) {
    throw Error(ErrorKind::MissingPosition, id.str());
  }
  state.pinned.erase(id);
  return state;
}

}  // namespace grex
