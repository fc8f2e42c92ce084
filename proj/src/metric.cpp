#include "catasym/metric.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace catasym {

namespace {

double circle_dist(double L, double a, double b) {
  double d = std::fabs(a - b);
  if (d > L / 2.0) d = L - d;
  return d;
}

/// Dijkstra over the vertex set augmented with the two query points.
/// Exact: no discretization of edges.
double graph_dist(const SpaceDescriptor& g, const ModelPoint& p,
                  const ModelPoint& q) {
  const auto& edges = g.edges();
  // Same edge: direct segment competes with vertex routes.
  double direct = std::numeric_limits<double>::infinity();
  if (p.edge == q.edge) direct = std::fabs(p.offset - q.offset);

  const int n = g.vertex_count();
  const int src = n, dst = n + 1;
  struct Arc {
    int to;
    double w;
  };
  std::vector<std::vector<Arc>> adj(n + 2);
  for (const auto& e : edges) {
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  const auto attach = [&](int node, const ModelPoint& x) {
    const auto& e = edges[x.edge];
    adj[node].push_back({e.u, x.offset});
    adj[e.u].push_back({node, x.offset});
    adj[node].push_back({e.v, e.length - x.offset});
    adj[e.v].push_back({node, e.length - x.offset});
  };
  attach(src, p);
  attach(dst, q);

  std::vector<double> dist(n + 2, std::numeric_limits<double>::infinity());
  dist[src] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == dst) break;
    for (const Arc& a : adj[u]) {
      const double nd = d + a.w;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.push({nd, a.to});
      }
    }
  }
  return std::min(direct, dist[dst]);
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

/// Great-circle distance, stable near 0 and pi.
double sphere_dist(const std::vector<double>& x, const std::vector<double>& y) {
  const double c = dot(x, y);
  // sin of the angle via the rejection of y from x; avoids acos blowup.
  double s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - c * x[i];
    s2 += r * r;
  }
  return std::atan2(std::sqrt(s2), c);
}

double euclid_dist(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double distance(const SpaceDescriptor& space, const ModelPoint& p,
                const ModelPoint& q) {
  switch (space.kind()) {
    case SpaceKind::Circle: {
      if (p.kind != PointKind::Circle || q.kind != PointKind::Circle)
        throw ContractViolation("circle distance: variant mismatch");
      return circle_dist(space.circle_length(), p.a, q.a);
    }
    case SpaceKind::MetricGraph: {
      if (p.kind != PointKind::Graph || q.kind != PointKind::Graph)
        throw ContractViolation("graph distance: variant mismatch");
      return graph_dist(space, p, q);
    }
    case SpaceKind::Suspension: {
      if (p.kind != PointKind::Suspension || q.kind != PointKind::Suspension)
        throw ContractViolation("suspension distance: variant mismatch");
      const double s = p.a, t = q.a;
      const double theta =
          truncated_distance(space.base(), p.base_ref(), q.base_ref());
      // Spherical join law via half-angle form: stable at both ends.
      const double sh = std::sin((s - t) / 2.0);
      const double ch = std::cos((s + t) / 2.0);
      const double cross = std::sin(s) * std::sin(t);
      const double hs = std::sin(theta / 2.0), hc = std::cos(theta / 2.0);
      const double A = sh * sh + cross * hs * hs;
      const double B = ch * ch + cross * hc * hc;
      return 2.0 * std::atan2(std::sqrt(std::max(A, 0.0)),
                              std::sqrt(std::max(B, 0.0)));
    }
    case SpaceKind::EuclideanCone: {
      if (p.kind != PointKind::Cone || q.kind != PointKind::Cone)
        throw ContractViolation("cone distance: variant mismatch");
      const double t1 = p.a, t2 = q.a;
      if (t1 == 0.0) return t2;
      if (t2 == 0.0) return t1;
      const double theta =
          truncated_distance(space.base(), p.base_ref(), q.base_ref());
      const double hs = std::sin(theta / 2.0);
      const double dr = t1 - t2;
      return std::sqrt(dr * dr + 4.0 * t1 * t2 * hs * hs);
    }
    case SpaceKind::RoundSphere: {
      if (p.kind != PointKind::Vector || q.kind != PointKind::Vector)
        throw ContractViolation("sphere distance: variant mismatch");
      return sphere_dist(p.coords, q.coords);
    }
    case SpaceKind::Euclidean: {
      if (p.kind != PointKind::Vector || q.kind != PointKind::Vector)
        throw ContractViolation("euclidean distance: variant mismatch");
      return euclid_dist(p.coords, q.coords);
    }
  }
  throw ContractViolation("unknown space kind");
}

double truncated_distance(const SpaceDescriptor& space, const ModelPoint& p,
                          const ModelPoint& q) {
  return std::min(distance(space, p, q), kPi);
}

namespace {

void append_net(const SpaceDescriptor& space, double region_bound, double eps,
                std::vector<ModelPoint>& out, std::size_t max_points);

void check_cap(std::size_t have, std::size_t add, std::size_t max_points) {
  if (have + add > max_points)
    throw SizeLimitError("epsilon_net would exceed the configured point cap");
}

/// Round up to a positive multiple of four; quarter symmetry keeps exact
/// antipodes and polar points in circle-derived nets.
std::size_t round4(double x) {
  const std::size_t n = static_cast<std::size_t>(std::ceil(x));
  return std::max<std::size_t>(4, ((n + 3) / 4) * 4);
}

void circle_net(double L, double eps, std::vector<ModelPoint>& out,
                std::size_t max_points) {
  // Rounded up to quarter symmetry: antipodes and polar points land on
  // exact net points, which the searches and certificates rely on.
  const std::size_t n = round4(L / (2.0 * eps));
  check_cap(out.size(), n, max_points);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(ModelPoint::circle_angle(static_cast<double>(i) * L /
                                           static_cast<double>(n)));
}

void suspension_net(const SpaceDescriptor& space, double eps,
                    std::vector<ModelPoint>& out, std::size_t max_points) {
  const SpaceDescriptor& base = space.base();
  // Meridian budget eps/2, row budget eps/2. Even row count keeps the
  // equator as an exact row.
  std::size_t rows = static_cast<std::size_t>(std::ceil(kPi / eps));
  if (rows % 2) ++rows;
  check_cap(out.size(), 2, max_points);
  out.push_back(normalize_point(
      space, ModelPoint::suspension_point(0.0, canonical_point(base))));
  out.push_back(normalize_point(
      space, ModelPoint::suspension_point(kPi, canonical_point(base))));
  for (std::size_t j = 1; j < rows; ++j) {
    const double s = static_cast<double>(j) * kPi / static_cast<double>(rows);
    const double half_band = kPi / (2.0 * static_cast<double>(rows));
    const double s_near_eq =
        std::fabs(s - kPi / 2.0) <= half_band ? kPi / 2.0
        : (s < kPi / 2.0 ? s + half_band : s - half_band);
    const double sin_max = std::sin(s_near_eq);
    if (base.kind() == SpaceKind::Circle) {
      const double L = base.circle_length();
      const std::size_t nj = round4(sin_max * L / eps);
      check_cap(out.size(), nj, max_points);
      for (std::size_t i = 0; i < nj; ++i)
        out.push_back(ModelPoint::suspension_point(
            s, ModelPoint::circle_angle(static_cast<double>(i) * L /
                                        static_cast<double>(nj))));
    } else {
      std::vector<ModelPoint> row;
      append_net(base, 0.0, eps / (2.0 * std::max(sin_max, 1e-9)), row,
                 max_points);
      check_cap(out.size(), row.size(), max_points);
      for (auto& b : row)
        out.push_back(ModelPoint::suspension_point(s, std::move(b)));
    }
  }
}

void cone_net(const SpaceDescriptor& space, double cap, double eps,
              std::vector<ModelPoint>& out, std::size_t max_points) {
  if (cap <= 0.0)
    throw ContractViolation("cone epsilon_net requires a radius cap");
  const SpaceDescriptor& base = space.base();
  check_cap(out.size(), 1, max_points);
  out.push_back(normalize_point(
      space, ModelPoint::cone_point(0.0, canonical_point(base))));
  const std::size_t rings =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cap / eps)));
  const double h = cap / static_cast<double>(rings);
  for (std::size_t i = 1; i <= rings; ++i) {
    const double r = static_cast<double>(i) * h;
    const double r_band = r;  // outer edge of the band served by this ring
    if (base.kind() == SpaceKind::Circle) {
      const double L = base.circle_length();
      const std::size_t nj = round4(r_band * L / eps);
      check_cap(out.size(), nj, max_points);
      for (std::size_t k = 0; k < nj; ++k)
        out.push_back(ModelPoint::cone_point(
            r, ModelPoint::circle_angle(static_cast<double>(k) * L /
                                        static_cast<double>(nj))));
    } else {
      std::vector<ModelPoint> ring;
      append_net(base, 0.0, eps / (2.0 * r_band), ring, max_points);
      check_cap(out.size(), ring.size(), max_points);
      for (auto& b : ring)
        out.push_back(ModelPoint::cone_point(r, std::move(b)));
    }
  }
}

void sphere_net(int dim, double eps, std::vector<ModelPoint>& out,
                std::size_t max_points) {
  if (dim == 1) {
    std::vector<ModelPoint> angles;
    circle_net(2.0 * kPi, eps, angles, max_points);
    check_cap(out.size(), angles.size(), max_points);
    for (const auto& a : angles)
      out.push_back(
          ModelPoint::vector_point({std::cos(a.a), std::sin(a.a)}));
    return;
  }
  // S^dim as latitude bands over S^(dim-1).
  std::size_t rows = static_cast<std::size_t>(std::ceil(kPi / eps));
  if (rows % 2) ++rows;
  std::vector<double> pole_hi(dim + 1, 0.0), pole_lo(dim + 1, 0.0);
  pole_hi[dim] = 1.0;
  pole_lo[dim] = -1.0;
  check_cap(out.size(), 2, max_points);
  out.push_back(ModelPoint::vector_point(pole_hi));
  out.push_back(ModelPoint::vector_point(pole_lo));
  for (std::size_t j = 1; j < rows; ++j) {
    const double s = static_cast<double>(j) * kPi / static_cast<double>(rows);
    const double half_band = kPi / (2.0 * static_cast<double>(rows));
    const double s_near_eq =
        std::fabs(s - kPi / 2.0) <= half_band ? kPi / 2.0
        : (s < kPi / 2.0 ? s + half_band : s - half_band);
    const double sin_max = std::sin(s_near_eq);
    std::vector<ModelPoint> row;
    sphere_net(dim - 1, eps / (2.0 * std::max(sin_max, 1e-9)), row, max_points);
    check_cap(out.size(), row.size(), max_points);
    for (const auto& b : row) {
      std::vector<double> x(dim + 1);
      for (int k = 0; k < dim; ++k) x[k] = std::sin(s) * b.coords[k];
      x[dim] = std::cos(s);
      out.push_back(ModelPoint::vector_point(std::move(x)));
    }
  }
}

void euclidean_net(int dim, double cap, double eps, std::vector<ModelPoint>& out,
                   std::size_t max_points) {
  if (cap <= 0.0)
    throw ContractViolation("euclidean epsilon_net requires a radius cap");
  const double g = 2.0 * eps / std::sqrt(static_cast<double>(dim));
  const long m = static_cast<long>(std::ceil(cap / g));
  std::vector<long> idx(dim, -m);
  for (;;) {
    std::vector<double> x(dim);
    double n2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      x[k] = static_cast<double>(idx[k]) * g;
      n2 += x[k] * x[k];
    }
    if (n2 <= (cap + eps) * (cap + eps)) {
      check_cap(out.size(), 1, max_points);
      out.push_back(ModelPoint::vector_point(std::move(x)));
    }
    int k = 0;
    while (k < dim && ++idx[k] > m) idx[k++] = -m;
    if (k == dim) break;
  }
}

void append_net(const SpaceDescriptor& space, double region_bound, double eps,
                std::vector<ModelPoint>& out, std::size_t max_points) {
  switch (space.kind()) {
    case SpaceKind::Circle:
      circle_net(space.circle_length(), eps, out, max_points);
      return;
    case SpaceKind::MetricGraph: {
      // Vertices once, then interior ladder points per edge.
      for (int v = 0; v < space.vertex_count(); ++v) {
        for (std::size_t e = 0; e < space.edges().size(); ++e) {
          const auto& ed = space.edges()[e];
          if (ed.u == v) {
            check_cap(out.size(), 1, max_points);
            out.push_back(ModelPoint::graph_point(static_cast<int>(e), 0.0));
            break;
          }
          if (ed.v == v) {
            check_cap(out.size(), 1, max_points);
            out.push_back(
                ModelPoint::graph_point(static_cast<int>(e), ed.length));
            break;
          }
        }
      }
      for (std::size_t e = 0; e < space.edges().size(); ++e) {
        const double len = space.edges()[e].length;
        const std::size_t k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(len / (2.0 * eps))));
        check_cap(out.size(), k - 1, max_points);
        for (std::size_t i = 1; i < k; ++i)
          out.push_back(ModelPoint::graph_point(
              static_cast<int>(e),
              static_cast<double>(i) * len / static_cast<double>(k)));
      }
      return;
    }
    case SpaceKind::Suspension:
      suspension_net(space, eps, out, max_points);
      return;
    case SpaceKind::EuclideanCone:
      cone_net(space, region_bound, eps, out, max_points);
      return;
    case SpaceKind::RoundSphere:
      sphere_net(space.dim(), eps, out, max_points);
      return;
    case SpaceKind::Euclidean:
      euclidean_net(space.dim(), region_bound, eps, out, max_points);
      return;
  }
  throw ContractViolation("unknown space kind");
}

}  // namespace

SampleSet epsilon_net(const SpaceDescriptor& space, double region_bound,
                      double eps, std::uint64_t seed, std::size_t max_points) {
  if (eps <= 0.0) throw ContractViolation("epsilon_net requires eps > 0");
  if (!space.bounded() && region_bound <= 0.0)
    throw ContractViolation(
        "epsilon_net over an unbounded variant requires a region bound");
  SampleSet s;
  s.mesh = eps;
  s.seed = seed;
  append_net(space, region_bound, eps, s.points, max_points);
  for (auto& p : s.points) p = normalize_point(space, std::move(p));
  return s;
}

SpaceDescriptor rescale(const SpaceDescriptor& space, double lambda) {
  if (lambda <= 0.0) throw ContractViolation("rescale requires lambda > 0");
  switch (space.kind()) {
    case SpaceKind::Circle:
      return SpaceDescriptor::circle(lambda * space.circle_length());
    case SpaceKind::MetricGraph: {
      auto edges = space.edges();
      for (auto& e : edges) e.length *= lambda;
      return SpaceDescriptor::metric_graph(space.vertex_count(),
                                           std::move(edges));
    }
    default:
      throw ContractViolation(
          "rescale supports only circle and graph variants");
  }
}

DiameterBounds diameter_bounds(const SpaceDescriptor& space,
                               const SampleSet& sample) {
  if (sample.points.empty())
    throw ContractViolation("diameter_bounds requires a nonempty sample");
  if (!space.bounded())
    throw ContractViolation("diameter_bounds requires a compact variant");
  const auto& pts = sample.points;
  const std::size_t n = pts.size();
  const double lower = parallel_map_reduce<double>(
      n, 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            m = std::max(m, distance(space, pts[i], pts[j]));
        return m;
      },
      [](double a, double b) { return std::max(a, b); });
  return {lower, lower + 2.0 * sample.mesh};
}

ModelPoint random_point(const SpaceDescriptor& space, double region_bound,
                        Rng& rng) {
  switch (space.kind()) {
    case SpaceKind::Circle:
      return ModelPoint::circle_angle(
          rng.uniform(0.0, space.circle_length()));
    case SpaceKind::MetricGraph: {
      double total = 0.0;
      for (const auto& e : space.edges()) total += e.length;
      double pick = rng.uniform(0.0, total);
      for (std::size_t i = 0; i < space.edges().size(); ++i) {
        const double len = space.edges()[i].length;
        if (pick <= len || i + 1 == space.edges().size())
          return ModelPoint::graph_point(static_cast<int>(i),
                                         std::min(pick, len));
        pick -= len;
      }
      throw ContractViolation("unreachable");
    }
    case SpaceKind::Suspension: {
      const double s = std::acos(1.0 - 2.0 * rng.uniform());
      return normalize_point(
          space, ModelPoint::suspension_point(
                     s, random_point(space.base(), 0.0, rng)));
    }
    case SpaceKind::EuclideanCone: {
      if (region_bound <= 0.0)
        throw ContractViolation("random cone point requires a region bound");
      const double r = region_bound * std::sqrt(rng.uniform());
      return normalize_point(
          space,
          ModelPoint::cone_point(r, random_point(space.base(), 0.0, rng)));
    }
    case SpaceKind::RoundSphere: {
      std::vector<double> x(space.dim() + 1);
      for (double& c : x) {
        // Box-Muller from the deterministic stream.
        const double u1 = std::max(rng.uniform(), 1e-300);
        const double u2 = rng.uniform();
        c = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
      }
      return normalize_point(space, ModelPoint::vector_point(std::move(x)));
    }
    case SpaceKind::Euclidean: {
      if (region_bound <= 0.0)
        throw ContractViolation(
            "random euclidean point requires a region bound");
      std::vector<double> x(space.dim());
      for (;;) {
        double n2 = 0.0;
        for (double& c : x) {
          c = rng.uniform(-1.0, 1.0);
          n2 += c * c;
        }
        if (n2 <= 1.0) break;
      }
      for (double& c : x) c *= region_bound;
      return ModelPoint::vector_point(std::move(x));
    }
  }
  throw ContractViolation("unknown space kind");
}

std::size_t nearest_sample(const SpaceDescriptor& space,
                           const std::vector<ModelPoint>& sample,
                           const ModelPoint& p) {
  if (sample.empty()) throw ContractViolation("empty sample");
  std::size_t best = 0;
  double best_d = distance(space, sample[0], p);
  for (std::size_t i = 1; i < sample.size(); ++i) {
    const double d = distance(space, sample[i], p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace catasym
