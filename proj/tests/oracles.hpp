#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "catasym/metric.hpp"
#include "catasym/space.hpp"

namespace oracles {

/// Shortest-path length through a dense neighborhood graph on sample
/// points, with exact local distances as edge weights. Converges to the
/// geodesic distance from above as the net refines.
inline double dense_path_length(const catasym::SpaceDescriptor& space,
                                const std::vector<catasym::ModelPoint>& pts,
                                std::size_t src, std::size_t dst,
                                double hop_radius) {
  const std::size_t n = pts.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  dist[src] = 0.0;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == dst) return d;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == u) continue;
      const double w = catasym::distance(space, pts[u], pts[v]);
      if (w > hop_radius) continue;
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({d + w, v});
      }
    }
  }
  return dist[dst];
}

/// Exhaustive mesh check: max over probe points of the distance to the net.
inline double covering_radius(const catasym::SpaceDescriptor& space,
                              const std::vector<catasym::ModelPoint>& net,
                              const std::vector<catasym::ModelPoint>& probes) {
  double worst = 0.0;
  for (const auto& p : probes) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : net)
      best = std::min(best, catasym::distance(space, p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

/// Brute-force maximum of f over a 1-d grid.
template <class F>
double grid_max(F f, double lo, double hi, int steps) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i)
    best = std::max(best, f(lo + (hi - lo) * i / steps));
  return best;
}

template <class F>
double grid_min(F f, double lo, double hi, int steps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i)
    best = std::min(best, f(lo + (hi - lo) * i / steps));
  return best;
}

}  // namespace oracles
