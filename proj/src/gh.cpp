#include "catasym/gh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catasym/cat1.hpp"

namespace catasym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

bool is_circle_like(const SpaceDescriptor& s, double* length) {
  if (s.kind() == SpaceKind::Circle) {
    *length = s.circle_length();
    return true;
  }
  if (s.kind() == SpaceKind::RoundSphere && s.dim() == 1) {
    *length = 2.0 * kPi;
    return true;
  }
  return false;
}

bool is_sphere2_like(const SpaceDescriptor& s, double* base_length) {
  if (s.kind() == SpaceKind::RoundSphere && s.dim() == 2) {
    *base_length = 2.0 * kPi;
    return true;
  }
  if (s.kind() == SpaceKind::Suspension &&
      s.base().kind() == SpaceKind::Circle) {
    *base_length = s.base().circle_length();
    return true;
  }
  return false;
}

/// Max-min pairwise distance over triples (3-point dispersion).
double dispersion3(const SpaceDescriptor& space,
                   const std::vector<ModelPoint>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i * n + j] = d[j * n + i] = distance(space, pts[i], pts[j]);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = d[i * n + j];
      if (dij <= best) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double m = std::min({dij, d[i * n + k], d[j * n + k]});
        best = std::max(best, m);
      }
    }
  return best;
}

}  // namespace

ApproximationReport check_c_approximation(
    const SpaceDescriptor& X, const SpaceDescriptor& Y,
    const std::vector<std::pair<ModelPoint, ModelPoint>>& map_sample,
    const std::vector<ModelPoint>& y_sample, double c) {
  require(!map_sample.empty(), "check_c_approximation requires map samples");
  require(!y_sample.empty(), "check_c_approximation requires Y samples");
  ApproximationReport rep;
  for (std::size_t i = 0; i < map_sample.size(); ++i)
    for (std::size_t j = i + 1; j < map_sample.size(); ++j) {
      const double dx =
          distance(X, map_sample[i].first, map_sample[j].first);
      const double dy =
          distance(Y, map_sample[i].second, map_sample[j].second);
      rep.worst_distortion =
          std::max(rep.worst_distortion, std::fabs(dy - dx));
    }
  for (const auto& y : y_sample) {
    double dmin = kInf;
    for (const auto& [x, fx] : map_sample)
      dmin = std::min(dmin, distance(Y, y, fx));
    rep.worst_coverage = std::max(rep.worst_coverage, dmin);
  }
  rep.ok = rep.worst_distortion < c && rep.worst_coverage < c;
  return rep;
}

std::optional<double> model_diameter(const SpaceDescriptor& space) {
  switch (space.kind()) {
    case SpaceKind::Circle:
      return space.circle_length() / 2.0;
    case SpaceKind::RoundSphere:
      return kPi;
    case SpaceKind::Suspension:
      return kPi;
    default:
      return std::nullopt;
  }
}

Correspondence greedy_correspondence(const SpaceDescriptor& X,
                                     const SampleSet& x_sample,
                                     const SpaceDescriptor& Y,
                                     const SampleSet& y_sample,
                                     std::uint64_t seed) {
  require(!x_sample.points.empty() && !y_sample.points.empty(),
          "greedy_correspondence requires samples");
  Rng rng(seed);
  const ModelPoint& x0 = x_sample.points[rng.index(x_sample.points.size())];
  const ModelPoint& y0 = y_sample.points[rng.index(y_sample.points.size())];

  Correspondence corr;
  // Profile matching against the random anchors keeps both sides covered.
  for (std::size_t i = 0; i < x_sample.points.size(); ++i) {
    const double px = distance(X, x0, x_sample.points[i]);
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t j = 0; j < y_sample.points.size(); ++j) {
      const double e = std::fabs(px - distance(Y, y0, y_sample.points[j]));
      if (e < bd) {
        bd = e;
        best = j;
      }
    }
    corr.pairs.push_back({i, best});
  }
  for (std::size_t j = 0; j < y_sample.points.size(); ++j) {
    const double py = distance(Y, y0, y_sample.points[j]);
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t i = 0; i < x_sample.points.size(); ++i) {
      const double e = std::fabs(py - distance(X, x0, x_sample.points[i]));
      if (e < bd) {
        bd = e;
        best = i;
      }
    }
    corr.pairs.push_back({best, j});
  }
  const std::size_t n = corr.pairs.size();
  corr.distortion = parallel_map_reduce<double>(
      n, 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double w = 0.0;
        for (std::size_t a = lo; a < hi; ++a)
          for (std::size_t b = a + 1; b < n; ++b) {
            const double dx = distance(X, x_sample.points[corr.pairs[a].first],
                                       x_sample.points[corr.pairs[b].first]);
            const double dy =
                distance(Y, y_sample.points[corr.pairs[a].second],
                         y_sample.points[corr.pairs[b].second]);
            w = std::max(w, std::fabs(dx - dy));
          }
        return w;
      },
      [](double a, double b) { return std::max(a, b); });
  return corr;
}

UpperBoundResult gh_upper_bound(const SpaceDescriptor& X,
                                const SpaceDescriptor& Y,
                                CorrespondenceFamily family, double mesh,
                                std::uint64_t seed) {
  const auto resolve = [&]() -> CorrespondenceFamily {
    if (family != CorrespondenceFamily::Auto) return family;
    if (X == Y) return CorrespondenceFamily::Identity;
    double lx = 0.0, ly = 0.0;
    if (is_circle_like(X, &lx) && is_circle_like(Y, &ly))
      return CorrespondenceFamily::CircleScaling;
    if (is_sphere2_like(X, &lx) && is_sphere2_like(Y, &ly))
      return CorrespondenceFamily::SuspensionSphereScaling;
    return CorrespondenceFamily::GreedyFallback;
  };

  switch (resolve()) {
    case CorrespondenceFamily::Identity:
      return {0.0, "identity correspondence (closed_form)"};
    case CorrespondenceFamily::CircleScaling: {
      double lx = 0.0, ly = 0.0;
      require(is_circle_like(X, &lx) && is_circle_like(Y, &ly),
              "circle scaling family needs circle-like spaces");
      // Radial scaling angle -> angle * ly/lx distorts distances by
      // (1 - ly/lx) * d, maximal at antipodes.
      return {std::fabs(lx - ly) / 4.0,
              "circle scaling correspondence (closed_form)"};
    }
    case CorrespondenceFamily::SuspensionSphereScaling: {
      double lx = 0.0, ly = 0.0;
      require(is_sphere2_like(X, &lx) && is_sphere2_like(Y, &ly),
              "suspension scaling family needs sphere-like spaces");
      // Base scaling propagated through the join law, which is 1-Lipschitz
      // in the truncated base angle: distortion max_theta
      // |theta ^ pi - (theta * l2/l1) ^ pi| at theta = pi.
      const double hi = std::max(lx, ly), lo = std::min(lx, ly);
      if (lo < 2.0 * kPi - 1e-12)
        throw ContractViolation(
            "suspension scaling family requires base length >= 2*pi");
      return {kPi * (hi - lo) / hi / 2.0,
              "suspension base-scaling correspondence (closed_form)"};
    }
    case CorrespondenceFamily::GreedyFallback: {
      require(X.bounded() && Y.bounded(),
              "greedy fallback requires compact variants");
      const SampleSet xs = epsilon_net(X, 0.0, mesh, seed);
      const SampleSet ys = epsilon_net(Y, 0.0, mesh, seed + 1);
      const Correspondence corr =
          greedy_correspondence(X, xs, Y, ys, seed + 2);
      return {0.5 * (corr.distortion + 2.0 * xs.mesh + 2.0 * ys.mesh),
              "greedy fallback correspondence (sampled, mesh " +
                  std::to_string(mesh) + ")"};
    }
    case CorrespondenceFamily::Auto:
      break;
  }
  throw ContractViolation("gh_upper_bound: no registered family");
}

LowerBoundResult gh_lower_bound(const SpaceDescriptor& X,
                                const SampleSet& x_sample,
                                const SpaceDescriptor& Y,
                                const SampleSet& y_sample) {
  require(!x_sample.points.empty() && !y_sample.points.empty(),
          "gh_lower_bound requires samples");
  LowerBoundResult res;
  res.value = 0.0;
  res.provenance = "no obstruction";

  const DiameterBounds dx = diameter_bounds(X, x_sample);
  const DiameterBounds dy = diameter_bounds(Y, y_sample);
  const double diam_gap =
      std::max({dx.lower - dy.upper, dy.lower - dx.upper, 0.0}) / 2.0;
  if (diam_gap > res.value) {
    res.value = diam_gap;
    res.provenance = "diameter obstruction (sampled(mesh))";
  }

  if (x_sample.points.size() <= 500 && y_sample.points.size() <= 500) {
    const double px = dispersion3(X, x_sample.points);
    const double py = dispersion3(Y, y_sample.points);
    const double pack_gap =
        std::max({px - (py + 2.0 * y_sample.mesh),
                  py - (px + 2.0 * x_sample.mesh), 0.0}) /
        2.0;
    if (pack_gap > res.value) {
      res.value = pack_gap;
      res.provenance = "3-point packing obstruction (sampled(mesh))";
    }
  }
  return res;
}

GHInterval gh_to_sphere(const SpaceDescriptor& Z, int n, double mesh,
                        std::uint64_t seed) {
  require(n == 2 || n == 3, "gh_to_sphere supports n in {2, 3}");
  require(admits_cat1(Z).cat1, "gh_to_sphere requires a CAT(1) model");
  const SpaceDescriptor sphere = n == 2 ? SpaceDescriptor::circle(2.0 * kPi)
                                        : SpaceDescriptor::round_sphere(2);

  GHInterval interval;
  const UpperBoundResult up = gh_upper_bound(Z, sphere);
  interval.upper = up.value;
  interval.upper_provenance = up.provenance;

  // Closed-form diameters tighten the lower side when available.
  double lower = 0.0;
  std::string lower_prov = "no obstruction";
  const auto dz = model_diameter(Z);
  const auto ds = model_diameter(sphere);
  if (dz && ds && std::fabs(*dz - *ds) / 2.0 > lower) {
    lower = std::fabs(*dz - *ds) / 2.0;
    lower_prov = "diameter obstruction (closed_form)";
  }
  const SampleSet zs = epsilon_net(Z, 0.0, mesh, seed);
  const SampleSet ss = epsilon_net(sphere, 0.0, mesh, seed + 1);
  const LowerBoundResult lb = gh_lower_bound(Z, zs, sphere, ss);
  if (lb.value > lower) {
    lower = lb.value;
    lower_prov = lb.provenance;
  }
  interval.lower = std::min(lower, interval.upper);
  interval.lower_provenance = lower_prov;
  return interval;
}

}  // namespace catasym
