#include "catasym/strainer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace catasym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

double norm_l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double norm_l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Direction-space suspender defect of the strainer at a cone point:
/// max over slots of (pi - angle(xi_i, eta_i)) and over distinct members of
/// (pairwise angle - pi/2), clamped at 0. On the round direction spaces of
/// our models the suspender conditions reduce to exactly these windows.
double direction_defect(const SpaceDescriptor& cone, const ModelPoint& x,
                        const std::vector<IdealPoint>& xi,
                        const std::vector<IdealPoint>& eta) {
  const int m = static_cast<int>(xi.size());
  double defect = 0.0;
  for (int i = 0; i < m; ++i) {
    const double a =
        angle_at(cone, x, AngleTarget{xi[i]}, AngleTarget{eta[i]});
    defect = std::max(defect, kPi - a);
  }
  std::vector<AngleTarget> members;
  for (const auto& p : xi) members.emplace_back(p);
  for (const auto& q : eta) members.emplace_back(q);
  for (int i = 0; i < 2 * m; ++i)
    for (int j = i + 1; j < 2 * m; ++j) {
      if (j == i + m) continue;  // slot pair, handled above
      const double a = angle_at(cone, x, members[i], members[j]);
      defect = std::max(defect, a - kPi / 2.0);
    }
  return defect;
}

}  // namespace

std::optional<IdealStrainer> certify_ideal_strainer(
    const SpaceDescriptor& cone, const std::vector<IdealPoint>& xi,
    const std::vector<IdealPoint>& eta, const SampleSet& base_sample,
    double delta, std::uint64_t seed) {
  require(cone.kind() == SpaceKind::EuclideanCone,
          "certify_ideal_strainer requires a cone");
  require(!xi.empty() && xi.size() == eta.size(),
          "strainer tuples must be nonempty and of equal size");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  const SpaceDescriptor& base = cone.base();
  require(admits_cat1(base).cat1,
          "certify_ideal_strainer requires an admissible CAT(1) base");

  const int m = static_cast<int>(xi.size());
  SuspenderCertificate cert;
  cert.m = m;
  cert.delta = delta;
  cert.sample_mesh = base_sample.mesh;
  for (int i = 0; i < m; ++i) {
    const ModelPoint p = normalize_point(base, xi[i].direction);
    const ModelPoint q = normalize_point(base, eta[i].direction);
    cert.p_tuple.push_back(p);
    cert.q_tuple.push_back(q);
    double sup = 0.0;
    for (const auto& z : base_sample.points)
      sup = std::max(sup, distance(base, p, z) + distance(base, z, q));
    cert.sup_raw.push_back(sup);
    cert.sup_certified.push_back(sup + 2.0 * base_sample.mesh);
    if (cert.sup_certified.back() >= kPi + delta) return std::nullopt;
  }
  cert.max_pairwise = 0.0;
  cert.min_pairwise = kInf;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      for (const double d :
           {distance(base, cert.p_tuple[i], cert.p_tuple[j]),
            distance(base, cert.p_tuple[i], cert.q_tuple[j]),
            distance(base, cert.q_tuple[i], cert.q_tuple[j])}) {
        cert.max_pairwise = std::max(cert.max_pairwise, d);
        cert.min_pairwise = std::min(cert.min_pairwise, d);
      }
    }
  if (m > 1 && cert.max_pairwise >= kPi / 2.0 + delta) return std::nullopt;
  if (m == 1) cert.min_pairwise = 0.0;

  // Direction spot check at seeded cone points: the ray directions must
  // form a suspender tuple of the same defect in each direction space.
  Rng rng(seed);
  for (int trial = 0; trial < 10; ++trial) {
    ModelPoint x = random_point(cone, 2.0, rng);
    if (x.a < 1e-6) continue;  // skip the apex neighborhood
    const double defect = direction_defect(cone, x, xi, eta);
    if (defect > delta + 1e-9) return std::nullopt;
  }

  IdealStrainer s;
  s.m = m;
  s.xi = xi;
  s.eta = eta;
  for (auto& p : s.xi) p.direction = normalize_point(base, p.direction);
  for (auto& q : s.eta) q.direction = normalize_point(base, q.direction);
  s.delta = delta;
  s.base_certificate = std::move(cert);
  return s;
}

std::optional<double> sharpest_certified_delta(
    const SpaceDescriptor& cone, const std::vector<IdealPoint>& xi,
    const std::vector<IdealPoint>& eta, const SampleSet& base_sample,
    std::uint64_t seed) {
  double hi = 0.999;
  if (!certify_ideal_strainer(cone, xi, eta, base_sample, hi, seed))
    return std::nullopt;
  double lo = 0.0;
  while (hi - lo > 1e-3) {
    const double mid = (lo + hi) / 2.0;
    if (certify_ideal_strainer(cone, xi, eta, base_sample, mid, seed))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<double> StrainerMap::evaluate(const ModelPoint& p) const {
  std::vector<double> v;
  v.reserve(coords.size());
  for (const auto& bf : coords) v.push_back(busemann_eval(bf, p));
  return v;
}

StrainerMap make_strainer_map(const SpaceDescriptor& cone,
                              const IdealStrainer& strainer) {
  StrainerMap map;
  map.cone = std::make_shared<const SpaceDescriptor>(cone);
  map.strainer = strainer;
  for (const auto& xi : strainer.xi)
    map.coords.push_back(make_busemann(cone, xi));
  return map;
}

namespace {

/// Moves y along the ray toward xi_i (amount < 0) or toward eta_i
/// (amount > 0, located by bisection) so that coordinate i changes by
/// exactly `amount`.
ModelPoint move_coordinate(const StrainerMap& map, const ModelPoint& y, int i,
                           double amount) {
  if (amount == 0.0) return y;
  const SpaceDescriptor& cone = *map.cone;
  const double b0 = busemann_eval(map.coords[i], y);
  if (amount < 0.0) {
    const RayPath ray = asymptotic_ray(cone, y, map.strainer.xi[i]);
    return normalize_point(cone, ray.eval(-amount));
  }
  const RayPath ray = asymptotic_ray(cone, y, map.strainer.eta[i]);
  const auto g = [&](double s) {
    return busemann_eval(map.coords[i], normalize_point(cone, ray.eval(s))) -
           b0 - amount;
  };
  double hi = std::max(2.0 * amount, 1e-6);
  int guard = 0;
  while (g(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 80)
      throw DivergenceError(
          "openness_iteration: coordinate increase not bracketed");
  }
  double lo = 0.0;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return normalize_point(cone, ray.eval(0.5 * (lo + hi)));
}

}  // namespace

IterationResult openness_iteration(const StrainerMap& map,
                                   const ModelPoint& x0_in,
                                   const std::vector<double>& u0, double tol,
                                   int max_iter) {
  const SpaceDescriptor& cone = *map.cone;
  const int m = static_cast<int>(map.coords.size());
  require(static_cast<int>(u0.size()) == m,
          "offset dimension must match the map");
  require(tol > 0.0, "openness_iteration requires tol > 0");

  const ModelPoint x0 = normalize_point(cone, x0_in);
  std::vector<double> target = map.evaluate(x0);
  for (int i = 0; i < m; ++i) target[i] += u0[i];

  IterationResult res;
  res.y_star = x0;
  ModelPoint y = x0;

  auto residual = [&](const ModelPoint& p) {
    std::vector<double> u = map.evaluate(p);
    for (int i = 0; i < m; ++i) u[i] = target[i] - u[i];
    return u;
  };

  std::vector<double> u = residual(y);
  res.trace.rows.push_back({0, norm_l1(u), norm_l2(u), 0.0, 0.0});

  int stalls = 0;
  for (int k = 1; k <= max_iter; ++k) {
    if (norm_l2(u) <= tol) {
      res.trace.converged = true;
      break;
    }
    const double prev_l1 = norm_l1(u);
    ModelPoint w = y;
    double moved = 0.0;
    for (int i = 0; i < m; ++i) {
      w = move_coordinate(map, w, i, u[i]);
      moved += std::fabs(u[i]);
    }
    const double step = distance(cone, y, w);
    y = w;
    u = residual(y);
    const double l1 = norm_l1(u);
    const double ratio = prev_l1 > 1e-15 ? l1 / prev_l1 : 0.0;
    res.trace.rows.push_back({k, l1, norm_l2(u), step, ratio});
    res.trace.max_ratio = std::max(res.trace.max_ratio, ratio);
    (void)moved;
    if (ratio >= 1.0 && l1 > 10.0 * tol) {
      if (++stalls >= 2) {
        std::ostringstream os;
        os << "openness_iteration diverged: l1 residual " << l1
           << " after step " << k << " (ratio " << ratio << ")";
        throw DivergenceError(os.str());
      }
    } else {
      stalls = 0;
    }
  }
  if (!res.trace.converged && norm_l2(u) <= tol) res.trace.converged = true;
  if (!res.trace.converged)
    throw BudgetError("openness_iteration: max_iter exceeded");
  res.y_star = y;
  res.trace.displacement = distance(cone, x0, y);
  return res;
}

RegularityConstants lipschitz_and_open_constants(
    const StrainerMap& map, const std::vector<ModelPoint>& points,
    std::size_t pair_budget, std::size_t probe_count, double probe_scale,
    double tol, std::uint64_t seed) {
  const SpaceDescriptor& cone = *map.cone;
  const std::size_t n = points.size();
  require(n >= 2, "lipschitz_and_open_constants requires points");
  const int m = static_cast<int>(map.coords.size());

  std::vector<std::vector<double>> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = map.evaluate(points[i]);

  RegularityConstants rc;
  const std::size_t total = n * (n - 1) / 2;
  if (total <= pair_budget) {
    rc.lip = parallel_map_reduce<double>(
        n, 0.0,
        [&](std::size_t lo, std::size_t hi) {
          double lip = 0.0;
          for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
              const double d = distance(cone, points[i], points[j]);
              if (d <= 0.0) continue;
              double s = 0.0;
              for (int k = 0; k < m; ++k) {
                const double t = values[i][k] - values[j][k];
                s += t * t;
              }
              lip = std::max(lip, std::sqrt(s) / d);
            }
          return lip;
        },
        [](double a, double b) { return std::max(a, b); });
    rc.pairs = total;
  } else {
    rc.lip = parallel_map_reduce<double>(
        pair_budget, 0.0,
        [&](std::size_t lo, std::size_t hi) {
          double lip = 0.0;
          Rng rng(seed + lo);
          for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t i = rng.index(n);
            const std::size_t j = rng.index(n);
            if (i == j) continue;
            const double d = distance(cone, points[i], points[j]);
            if (d <= 0.0) continue;
            double s = 0.0;
            for (int c = 0; c < m; ++c) {
              const double t = values[i][c] - values[j][c];
              s += t * t;
            }
            lip = std::max(lip, std::sqrt(s) / d);
          }
          return lip;
        },
        [](double a, double b) { return std::max(a, b); });
    rc.pairs = pair_budget;
  }

  Rng rng(seed * 1315423911ULL + 17);
  double open_c = 0.0;
  for (std::size_t t = 0; t < probe_count; ++t) {
    const ModelPoint& x0 = points[rng.index(n)];
    std::vector<double> u0(m);
    double n2 = 0.0;
    for (double& c : u0) {
      const double u1 = std::max(rng.uniform(), 1e-300);
      const double u2 = rng.uniform();
      c = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
      n2 += c * c;
    }
    const double mag = probe_scale * (0.1 + 0.9 * rng.uniform());
    for (double& c : u0) c *= mag / std::sqrt(std::max(n2, 1e-300));
    const IterationResult it = openness_iteration(map, x0, u0, tol);
    open_c = std::max(open_c, it.trace.displacement / mag);
    ++rc.probes;
  }
  rc.open_c = open_c;
  return rc;
}

FirstVariationInequalityReport first_variation_inequalities_check(
    const StrainerMap& map,
    const std::vector<std::pair<ModelPoint, ModelPoint>>& endpoints) {
  const SpaceDescriptor& cone = *map.cone;
  const int m = static_cast<int>(map.coords.size());
  FirstVariationInequalityReport rep;

  for (const auto& [x, y] : endpoints) {
    if (distance(cone, x, y) <= 0.0) continue;
    const GeodesicPath g = cone_geodesic(cone, x, y);
    ++rep.geodesics;

    const std::vector<double> bx = map.evaluate(x);
    const std::vector<double> by = map.evaluate(y);

    // Right-derivative vector of the map along the geodesic at a grid of
    // parameters; the derivative toward the far endpoint is -cos of the
    // angle against each ray.
    const std::vector<double> params = {0.0, 0.25 * g.length, 0.5 * g.length,
                                        0.75 * g.length};
    std::vector<std::vector<double>> derivs;
    for (double s : params) {
      const ModelPoint at = normalize_point(cone, g.eval(s));
      if (distance(cone, at, y) <= 0.0) continue;
      std::vector<double> d(m);
      for (int i = 0; i < m; ++i)
        d[i] = -std::cos(angle_at(cone, at, AngleTarget{map.strainer.xi[i]},
                                  AngleTarget{y}));
      derivs.push_back(std::move(d));
    }
    if (derivs.empty()) continue;

    // Chord slope against the derivative at the start.
    double norm_slope2 = 0.0, norm_deriv2 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double slope = (by[i] - bx[i]) / g.length;
      rep.max_coordinate_residual = std::max(
          rep.max_coordinate_residual, std::fabs(slope - derivs[0][i]));
      norm_slope2 += slope * slope;
      norm_deriv2 += derivs[0][i] * derivs[0][i];
      if (std::fabs(by[i] - bx[i]) <= 1e-9) {
        ++rep.level_coordinate_cases;
        rep.max_level_coordinate_derivative = std::max(
            rep.max_level_coordinate_derivative, std::fabs(derivs[0][i]));
      }
    }
    rep.max_norm_residual =
        std::max(rep.max_norm_residual,
                 std::fabs(std::sqrt(norm_slope2) - std::sqrt(norm_deriv2)));

    for (std::size_t a = 0; a < derivs.size(); ++a)
      for (std::size_t b = a + 1; b < derivs.size(); ++b) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
          const double t = derivs[a][i] - derivs[b][i];
          s += t * t;
        }
        rep.max_derivative_variation =
            std::max(rep.max_derivative_variation, std::sqrt(s));
      }

    bool equal_map = true;
    for (int i = 0; i < m; ++i)
      if (std::fabs(by[i] - bx[i]) > 1e-9) equal_map = false;
    if (equal_map) {
      ++rep.equal_map_cases;
      for (const auto& d : derivs)
        rep.max_equal_map_derivative =
            std::max(rep.max_equal_map_derivative, norm_l2(d));
    }
  }
  return rep;
}

BiLipschitzReport bilipschitz_verify(const StrainerMap& map,
                                     const std::vector<ModelPoint>& points,
                                     double mesh, std::size_t pair_budget,
                                     double tol, std::uint64_t seed) {
  const SpaceDescriptor& cone = *map.cone;
  const std::size_t n = points.size();
  require(n >= 2, "bilipschitz_verify requires points");
  const int m = static_cast<int>(map.coords.size());

  std::vector<std::vector<double>> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = map.evaluate(points[i]);

  BiLipschitzReport rep;
  rep.separation_floor = 10.0 * mesh;
  rep.lower = kInf;
  rep.upper = 0.0;

  struct Acc {
    double lower = kInf;
    double upper = 0.0;
    std::size_t violations = 0;
    std::size_t scanned = 0;
  };
  const auto eval_pair = [&](Acc& a, std::size_t i, std::size_t j) {
    const double d = distance(cone, points[i], points[j]);
    if (d <= 0.0) return;
    double s = 0.0;
    for (int c = 0; c < m; ++c) {
      const double t = values[i][c] - values[j][c];
      s += t * t;
    }
    const double img = std::sqrt(s);
    ++a.scanned;
    a.upper = std::max(a.upper, img / d);
    if (d >= rep.separation_floor) {
      a.lower = std::min(a.lower, img / d);
      if (img <= tol) ++a.violations;
    }
  };
  const auto combine = [](Acc x, Acc y) {
    return Acc{std::min(x.lower, y.lower), std::max(x.upper, y.upper),
               x.violations + y.violations, x.scanned + y.scanned};
  };

  const std::size_t total = n * (n - 1) / 2;
  Acc acc;
  if (total <= pair_budget) {
    acc = parallel_map_reduce<Acc>(
        n, Acc{},
        [&](std::size_t lo, std::size_t hi) {
          Acc a;
          for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = i + 1; j < n; ++j) eval_pair(a, i, j);
          return a;
        },
        combine);
  } else {
    acc = parallel_map_reduce<Acc>(
        pair_budget, Acc{},
        [&](std::size_t lo, std::size_t hi) {
          Acc a;
          Rng rng(seed + lo);
          for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t i = rng.index(n);
            const std::size_t j = rng.index(n);
            if (i != j) eval_pair(a, i, j);
          }
          return a;
        },
        combine);
  }
  rep.lower = acc.lower;
  rep.upper = acc.upper;
  rep.injectivity_violations = acc.violations;
  rep.pairs_scanned = acc.scanned;
  return rep;
}

SphereMapReport sphere_map_distortion(const StrainerMap& map,
                                      const SampleSet& base_sample,
                                      double norm_tol) {
  const SpaceDescriptor& cone = *map.cone;
  const SpaceDescriptor& base = cone.base();
  const std::size_t n = base_sample.points.size();
  require(n >= 2, "sphere_map_distortion requires base samples");
  const int m = static_cast<int>(map.coords.size());

  SphereMapReport rep;
  rep.min_norm = kInf;
  std::vector<std::vector<double>> image(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ModelPoint unit = normalize_point(
        cone, ModelPoint::cone_point(1.0, base_sample.points[i]));
    std::vector<double> v = map.evaluate(unit);
    const double norm = norm_l2(v);
    rep.min_norm = std::min(rep.min_norm, norm);
    if (norm <= norm_tol) {
      rep.normalization_failure = true;
      return rep;
    }
    for (double& c : v) c /= norm;
    image[i] = std::move(v);
  }

  const double floor = 10.0 * base_sample.mesh;
  struct Acc {
    double lower = kInf;
    double upper = 0.0;
    std::size_t pairs = 0;
  };
  const Acc acc = parallel_map_reduce<Acc>(
      n, Acc{},
      [&](std::size_t lo, std::size_t hi) {
        Acc a;
        for (std::size_t i = lo; i < hi; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            const double dz = std::min(
                distance(base, base_sample.points[i], base_sample.points[j]),
                kPi);
            if (dz < floor) continue;
            double dot = 0.0;
            for (int c = 0; c < m; ++c) dot += image[i][c] * image[j][c];
            double s2 = 0.0;
            for (int c = 0; c < m; ++c) {
              const double r = image[j][c] - dot * image[i][c];
              s2 += r * r;
            }
            const double dimg = std::atan2(std::sqrt(s2), dot);
            ++a.pairs;
            a.lower = std::min(a.lower, dimg / dz);
            a.upper = std::max(a.upper, dimg / dz);
          }
        return a;
      },
      [](Acc x, Acc y) {
        return Acc{std::min(x.lower, y.lower), std::max(x.upper, y.upper),
                   x.pairs + y.pairs};
      });
  rep.lower = acc.lower;
  rep.upper = acc.upper;
  rep.pairs = acc.pairs;
  return rep;
}

}  // namespace catasym
