#include "catasym/busemann.hpp"

#include <cmath>
#include <limits>

namespace catasym {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

}  // namespace

BusemannFunction make_busemann(const SpaceDescriptor& cone,
                               const IdealPoint& xi,
                               BusemannFunction::Mode mode, double t_max) {
  require(cone.kind() == SpaceKind::EuclideanCone,
          "busemann functions live on cone models");
  require(t_max > 0.0, "limit evaluator requires t_max > 0");
  BusemannFunction bf;
  bf.cone = std::make_shared<const SpaceDescriptor>(cone);
  bf.xi.direction = normalize_point(cone.base(), xi.direction);
  bf.mode = mode;
  bf.t_max = t_max;
  return bf;
}

double busemann_eval(const BusemannFunction& bf, const ModelPoint& p0) {
  const SpaceDescriptor& cone = *bf.cone;
  const ModelPoint p = normalize_point(cone, p0);
  if (bf.mode == BusemannFunction::Mode::Limit) {
    const ModelPoint far = normalize_point(
        cone, ModelPoint::cone_point(bf.t_max, bf.xi.direction));
    return distance(cone, p, far) - bf.t_max;
  }
  if (is_apex(p)) return 0.0;
  const double theta =
      truncated_distance(cone.base(), bf.xi.direction, p.base_ref());
  return -p.a * std::cos(theta);
}

HoroballReport horoball_identity_check(const BusemannFunction& bf,
                                       const ModelPoint& p0, double r,
                                       double mesh, std::uint64_t seed) {
  const SpaceDescriptor& cone = *bf.cone;
  const ModelPoint p = normalize_point(cone, p0);
  const double bp = busemann_eval(bf, p);
  if (bp <= -r)
    throw ContractViolation("horoball_identity_check: p lies in the horoball");

  HoroballReport rep;
  rep.mesh = mesh;
  rep.predicted = bp + r;
  // The nearest boundary point sits on the ray from p toward xi at
  // parameter b(p) + r, so this cap always contains it.
  const double cap = p.a + rep.predicted + 1.0;
  const SampleSet net = epsilon_net(cone, cap, mesh, seed);
  double best = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (const auto& z : net.points) {
    if (std::fabs(busemann_eval(bf, z) + r) > mesh) continue;
    ++count;
    best = std::min(best, distance(cone, p, z));
  }
  require(count > 0, "horoball_identity_check: empty boundary band");
  rep.boundary_samples = count;
  rep.measured = best;
  rep.residual = std::fabs(best - rep.predicted);
  return rep;
}

FirstVariationReport first_variation_check(const SpaceDescriptor& cone,
                                           const BusemannFunction& bf,
                                           const ModelPoint& x,
                                           const ModelPoint& y, double h) {
  require(h > 0.0, "first_variation_check requires h > 0");
  FirstVariationReport rep;
  const GeodesicPath g = cone_geodesic(cone, x, y);
  if (g.through_apex && g.breakpoints.size() >= 2 &&
      g.breakpoints[1].first <= h) {
    rep.step_degenerate = true;
    return rep;
  }
  const double b0 = busemann_eval(bf, g.eval(0.0));
  const double b1 = busemann_eval(bf, g.eval(std::min(h, g.length)));
  rep.forward_difference = (b1 - b0) / std::min(h, g.length);
  rep.angle = angle_at(cone, x, AngleTarget{bf.xi}, AngleTarget{y});
  rep.residual = std::fabs(rep.forward_difference + std::cos(rep.angle));
  return rep;
}

LevelAngleReport level_set_angle_check(const SpaceDescriptor& cone,
                                       const BusemannFunction& bf,
                                       const SampleSet& sample, double delta,
                                       std::size_t pair_budget,
                                       std::uint64_t seed) {
  const auto& pts = sample.points;
  const std::size_t n = pts.size();
  require(n >= 2, "level_set_angle_check requires at least two samples");

  std::vector<double> bvals(n);
  for (std::size_t i = 0; i < n; ++i) bvals[i] = busemann_eval(bf, pts[i]);

  LevelAngleReport rep;
  rep.max_level_angle = 0.0;
  rep.min_level_angle = kPi;
  rep.min_angle_sum = std::numeric_limits<double>::infinity();
  rep.max_angle_sum = 0.0;

  const auto angle_pair = [&](std::size_t i, std::size_t j) {
    const double ax =
        angle_at(cone, pts[i], AngleTarget{bf.xi}, AngleTarget{pts[j]});
    const double ay =
        angle_at(cone, pts[j], AngleTarget{bf.xi}, AngleTarget{pts[i]});
    return std::pair<double, double>{ax, ay};
  };

  // Angle sums over all pairs, or a seeded subsample past the budget.
  const std::size_t total = n * (n - 1) / 2;
  if (total <= pair_budget) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (distance(cone, pts[i], pts[j]) <= 0.0) continue;
        const auto [ax, ay] = angle_pair(i, j);
        ++rep.checked_pairs;
        rep.min_angle_sum = std::min(rep.min_angle_sum, ax + ay);
        rep.max_angle_sum = std::max(rep.max_angle_sum, ax + ay);
      }
  } else {
    Rng rng(seed);
    for (std::size_t k = 0; k < pair_budget; ++k) {
      const std::size_t i = rng.index(n);
      const std::size_t j = rng.index(n);
      if (i == j || distance(cone, pts[i], pts[j]) <= 0.0) continue;
      const auto [ax, ay] = angle_pair(i, j);
      ++rep.checked_pairs;
      rep.min_angle_sum = std::min(rep.min_angle_sum, ax + ay);
      rep.max_angle_sum = std::max(rep.max_angle_sum, ax + ay);
    }
  }

  // Level pairs from runs of equal Busemann values.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return bvals[a] < bvals[b]; });
  std::size_t run_begin = 0;
  for (std::size_t k = 1; k <= n && rep.level_pairs <= pair_budget; ++k) {
    if (k < n && bvals[order[k]] - bvals[order[run_begin]] <= 1e-9) continue;
    for (std::size_t a = run_begin; a < k && rep.level_pairs <= pair_budget;
         ++a)
      for (std::size_t b = a + 1; b < k && rep.level_pairs <= pair_budget;
           ++b) {
        const std::size_t i = order[a], j = order[b];
        if (std::fabs(bvals[i] - bvals[j]) > 1e-9) continue;
        if (distance(cone, pts[i], pts[j]) <= 0.0) continue;
        const auto [ax, ay] = angle_pair(i, j);
        ++rep.level_pairs;
        rep.max_level_angle = std::max({rep.max_level_angle, ax, ay});
        rep.min_level_angle = std::min({rep.min_level_angle, ax, ay});
      }
    run_begin = k;
  }
  (void)delta;
  require(rep.level_pairs > 0, "level_set_angle_check: no level pairs found");
  return rep;
}

}  // namespace catasym
