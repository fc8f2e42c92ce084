#include "catasym/cone.hpp"

#include <cmath>
#include <cstdio>

namespace catasym {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

double wrap_angle(double a, double L) {
  double r = std::fmod(a, L);
  if (r < 0.0) r += L;
  return r == L ? 0.0 : r;
}

bool circle_base(const SpaceDescriptor& cone) {
  return cone.kind() == SpaceKind::EuclideanCone &&
         cone.base().kind() == SpaceKind::Circle;
}

bool suspension_base(const SpaceDescriptor& cone) {
  return cone.kind() == SpaceKind::EuclideanCone &&
         cone.base().kind() == SpaceKind::Suspension;
}

/// Planar direction at an off-apex point p toward another cone point.
/// Targets behind the apex (base arc >= pi) start toward the apex.
std::array<double, 2> planar_dir_to_point(const SpaceDescriptor& cone,
                                          const ModelPoint& p,
                                          const ModelPoint& q) {
  if (is_apex(q)) return {-1.0, 0.0};
  const double L = cone.base().circle_length();
  DevelopedChart chart{L, p.base_ref().a, kPi};
  const double theta =
      std::min(std::fabs(chart.signed_arc(q.base_ref().a)), L / 2.0);
  if (theta >= kPi) return {-1.0, 0.0};
  const auto B = chart.to_plane(q.a, q.base_ref().a);
  const double dx = B[0] - p.a, dy = B[1];
  const double n = std::hypot(dx, dy);
  require(n > 0.0, "angle target coincides with the foot point");
  return {dx / n, dy / n};
}

std::array<double, 2> planar_dir_to_ideal(const SpaceDescriptor& cone,
                                          const ModelPoint& p,
                                          const ModelPoint& xi_dir) {
  const double L = cone.base().circle_length();
  DevelopedChart chart{L, p.base_ref().a, kPi};
  const double arc = chart.signed_arc(xi_dir.a);
  if (std::fabs(arc) >= kPi) return {-1.0, 0.0};
  return {std::cos(arc), std::sin(arc)};
}

double angle_between_2d(const std::array<double, 2>& u,
                        const std::array<double, 2>& v) {
  const double cross = u[0] * v[1] - u[1] * v[0];
  const double dot = u[0] * v[0] + u[1] * v[1];
  return std::atan2(std::fabs(cross), dot);
}

double angle_between_3d(const std::array<double, 3>& u,
                        const std::array<double, 3>& v) {
  const std::array<double, 3> c = {u[1] * v[2] - u[2] * v[1],
                                   u[2] * v[0] - u[0] * v[2],
                                   u[0] * v[1] - u[1] * v[0]};
  const double s = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::atan2(s, dot);
}

SpaceDescriptor factor_cone(const SpaceDescriptor& cone_over_susp) {
  return SpaceDescriptor::euclidean_cone(cone_over_susp.base().base());
}

/// Suspension-law angle between axis directions (sigma, base angle), the
/// direction space at an axis point being suspension(circle(L)).
double axis_angle(const SpaceDescriptor& base_circle, double s1,
                  const ModelPoint& a1, double s2, const ModelPoint& a2) {
  const SpaceDescriptor susp = SpaceDescriptor::suspension(base_circle);
  const ModelPoint d1 =
      normalize_point(susp, ModelPoint::suspension_point(s1, a1));
  const ModelPoint d2 =
      normalize_point(susp, ModelPoint::suspension_point(s2, a2));
  return distance(susp, d1, d2);
}

}  // namespace

double DevelopedChart::signed_arc(double base_angle) const {
  double d = wrap_angle(base_angle - reference_angle, length);
  if (d > length / 2.0) d -= length;
  return d;
}

std::array<double, 2> DevelopedChart::to_plane(double radius,
                                               double base_angle) const {
  const double phi = signed_arc(base_angle);
  return {radius * std::cos(phi), radius * std::sin(phi)};
}

ModelPoint DevelopedChart::from_plane(const std::array<double, 2>& xy) const {
  const double r = std::hypot(xy[0], xy[1]);
  if (r == 0.0)
    return ModelPoint::cone_point(0.0, ModelPoint::circle_angle(0.0));
  const double phi = std::atan2(xy[1], xy[0]);
  return ModelPoint::cone_point(
      r, ModelPoint::circle_angle(wrap_angle(reference_angle + phi, length)));
}

ModelPoint GeodesicPath::eval(double s) const {
  s = std::min(std::max(s, 0.0), length);
  if (chart_) {
    const double u = length > 0.0 ? s / length : 0.0;
    return chart_->from_plane({plane_a_[0] + u * (plane_b_[0] - plane_a_[0]),
                               plane_a_[1] + u * (plane_b_[1] - plane_a_[1])});
  }
  if (leg_ || space_) {
    // Product mode: linear height + factor leg.
    const double u = length > 0.0 ? s / length : 0.0;
    const double h = h0_ + u * (h1_ - h0_);
    ModelPoint w = leg_ ? leg_->eval(u * leg_len_) : factor_point_;
    return from_product(*space_, {h, w.a, w.base_ref()});
  }
  // Radial or apex concatenation: piecewise along breakpoints.
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto& [s0, p0] = breakpoints[i];
    const auto& [s1, p1] = breakpoints[i + 1];
    if (s > s1 && i + 2 < breakpoints.size()) continue;
    if (is_apex(p0))
      return ModelPoint::cone_point(s - s0, p1.base_ref());
    if (is_apex(p1))
      return ModelPoint::cone_point(p0.a - (s - s0), p0.base_ref());
    break;
  }
  throw ContractViolation("geodesic eval: unsupported segment");
}

GeodesicPath cone_geodesic(const SpaceDescriptor& cone, const ModelPoint& p0,
                           const ModelPoint& q0) {
  require(cone.kind() == SpaceKind::EuclideanCone,
          "cone_geodesic requires a cone");
  const ModelPoint p = normalize_point(cone, p0);
  const ModelPoint q = normalize_point(cone, q0);
  const double d = distance(cone, p, q);
  require(d > 0.0, "cone_geodesic requires distinct points");

  GeodesicPath g;
  g.length = d;

  if (suspension_base(cone)) {
    const auto cp = to_product(cone, p);
    const auto cq = to_product(cone, q);
    const auto factor = std::make_shared<const SpaceDescriptor>(
        factor_cone(cone));
    const ModelPoint wp = normalize_point(
        *factor, ModelPoint::cone_point(cp.radius, cp.base));
    const ModelPoint wq = normalize_point(
        *factor, ModelPoint::cone_point(cq.radius, cq.base));
    const double d2 = distance(*factor, wp, wq);
    g.space_ = std::make_shared<const SpaceDescriptor>(cone);
    g.h0_ = cp.h;
    g.h1_ = cq.h;
    g.breakpoints.push_back({0.0, p});
    if (d2 > 0.0) {
      auto leg = std::make_shared<GeodesicPath>(
          cone_geodesic(*factor, wp, wq));
      g.leg_len_ = leg->length;
      if (leg->through_apex) {
        // Axis crossing of the product path.
        const double u_apex = leg->breakpoints[1].first;
        const double s_star = d * u_apex / d2;
        const double h_star = cp.h + (s_star / d) * (cq.h - cp.h);
        g.breakpoints.push_back(
            {s_star,
             from_product(cone, {h_star, 0.0, canonical_point(
                                                  factor->base())})});
        g.through_apex = std::fabs(h_star) <= 1e-12;
        g.apex_tie = leg->apex_tie;
      }
      g.leg_ = std::move(leg);
    } else {
      g.factor_point_ = wp;
    }
    g.breakpoints.push_back({d, q});
    return g;
  }

  require(circle_base(cone), "cone_geodesic supports circle bases and "
                             "product decompositions over suspensions");

  if (is_apex(p) || is_apex(q)) {
    g.breakpoints.push_back({0.0, p});
    g.breakpoints.push_back({d, q});
    return g;
  }

  const double L = cone.base().circle_length();
  const double theta = std::min(
      std::fabs(p.base_ref().a - q.base_ref().a) <= L / 2.0
          ? std::fabs(p.base_ref().a - q.base_ref().a)
          : L - std::fabs(p.base_ref().a - q.base_ref().a),
      L / 2.0);

  if (theta >= kPi) {
    // Through the apex; at theta == pi the chart segment ties with it.
    g.through_apex = true;
    g.apex_tie = std::fabs(theta - kPi) <= 1e-15;
    g.breakpoints.push_back({0.0, p});
    g.breakpoints.push_back(
        {p.a, normalize_point(
                  cone, ModelPoint::cone_point(
                            0.0, canonical_point(cone.base())))});
    g.breakpoints.push_back({d, q});
    return g;
  }

  DevelopedChart chart{L, p.base_ref().a, kPi};
  g.chart_ = chart;
  g.plane_a_ = chart.to_plane(p.a, p.base_ref().a);
  g.plane_b_ = chart.to_plane(q.a, q.base_ref().a);
  g.breakpoints.push_back({0.0, p});
  g.breakpoints.push_back({d, q});
  return g;
}

ModelPoint RayPath::eval(double t) const {
  t = std::max(t, 0.0);
  switch (mode) {
    case Mode::ApexRay:
      return t == 0.0
                 ? origin
                 : ModelPoint::cone_point(t, target.direction);
    case Mode::ChartLine:
      return chart->from_plane({plane_origin[0] + t * plane_dir[0],
                                plane_origin[1] + t * plane_dir[1]});
    case Mode::ThroughApex:
      if (t <= apex_param)
        return ModelPoint::cone_point(apex_param - t == 0.0 ? 0.0
                                                            : apex_param - t,
                                      origin.base_ref());
      return ModelPoint::cone_point(t - apex_param, target.direction);
    case Mode::Product: {
      const double h = h0 + t * cos_split;
      if (factor_ray) {
        const ModelPoint w = factor_ray->eval(t * sin_split);
        return from_product(*cone_space, {h, w.a, w.base_ref()});
      }
      return from_product(*cone_space,
                          {h, factor_radius_, factor_base_});
    }
  }
  throw ContractViolation("unknown ray mode");
}

RayPath asymptotic_ray(const SpaceDescriptor& cone, const ModelPoint& p0,
                       const IdealPoint& xi0) {
  require(cone.kind() == SpaceKind::EuclideanCone,
          "asymptotic_ray requires a cone");
  RayPath ray;
  ray.origin = normalize_point(cone, p0);
  ray.target.direction = normalize_point(cone.base(), xi0.direction);

  if (suspension_base(cone)) {
    const auto pc = to_product(cone, ray.origin);
    const auto factor =
        std::make_shared<const SpaceDescriptor>(factor_cone(cone));
    ray.mode = RayPath::Mode::Product;
    ray.cone_space = std::make_shared<const SpaceDescriptor>(cone);
    ray.h0 = pc.h;
    const double s_xi = ray.target.direction.a;
    if (s_xi == 0.0 || s_xi == kPi) {
      ray.cos_split = s_xi == 0.0 ? 1.0 : -1.0;
      ray.sin_split = 0.0;
      ray.factor_radius_ = pc.radius;
      ray.factor_base_ = pc.base;
      return ray;
    }
    ray.cos_split = std::cos(s_xi);
    ray.sin_split = std::sin(s_xi);
    const ModelPoint wp =
        normalize_point(*factor, ModelPoint::cone_point(pc.radius, pc.base));
    ray.factor_ray = std::make_shared<const RayPath>(
        asymptotic_ray(*factor, wp, IdealPoint{ray.target.direction.base_ref()}));
    return ray;
  }

  require(circle_base(cone), "asymptotic_ray supports circle bases and "
                             "product decompositions over suspensions");

  if (is_apex(ray.origin)) {
    ray.mode = RayPath::Mode::ApexRay;
    return ray;
  }

  const double L = cone.base().circle_length();
  DevelopedChart chart{L, ray.origin.base_ref().a, kPi};
  const double arc = chart.signed_arc(ray.target.direction.a);
  if (std::fabs(arc) >= kPi) {
    ray.mode = RayPath::Mode::ThroughApex;
    ray.apex_param = ray.origin.a;
    return ray;
  }
  ray.mode = RayPath::Mode::ChartLine;
  ray.chart = chart;
  ray.plane_origin = {ray.origin.a, 0.0};
  ray.plane_dir = {std::cos(arc), std::sin(arc)};
  return ray;
}

namespace {

/// Direction data at p toward a target: either a planar unit vector (p off
/// the apex of a circle-base cone), a 3-vector (p off the axis, suspension
/// base), or axis coordinates (sigma, base angle point).
struct AxisDir {
  double sigma = 0.0;
  ModelPoint base;
};

AxisDir axis_dir_to(const SpaceDescriptor& cone, const SpaceDescriptor& factor,
                    const ModelPoint& p, const AngleTarget& t) {
  const auto pc = to_product(cone, p);
  if (std::holds_alternative<IdealPoint>(t)) {
    const ModelPoint& xi = std::get<IdealPoint>(t).direction;
    return {xi.a, xi.base_ref()};
  }
  const ModelPoint q = normalize_point(cone, std::get<ModelPoint>(t));
  const auto qc = to_product(cone, q);
  const ModelPoint wq =
      normalize_point(factor, ModelPoint::cone_point(qc.radius, qc.base));
  const double dh = qc.h - pc.h;
  const double d2 = qc.radius;  // factor distance from the 2d apex
  require(dh != 0.0 || d2 != 0.0, "angle target coincides with the foot point");
  return {std::atan2(d2, dh), wq.base ? wq.base_ref()
                                      : canonical_point(factor.base())};
}

std::array<double, 3> product_dir_to(const SpaceDescriptor& cone,
                                     const SpaceDescriptor& factor,
                                     const ModelPoint& p, const ModelPoint& wp,
                                     const AngleTarget& t) {
  const auto pc = to_product(cone, p);
  if (std::holds_alternative<IdealPoint>(t)) {
    const ModelPoint& xi = std::get<IdealPoint>(t).direction;
    const double s_xi = xi.a;
    if (s_xi == 0.0 || s_xi == kPi)
      return {s_xi == 0.0 ? 1.0 : -1.0, 0.0, 0.0};
    const auto d2 = planar_dir_to_ideal(factor, wp, xi.base_ref());
    return {std::cos(s_xi), std::sin(s_xi) * d2[0], std::sin(s_xi) * d2[1]};
  }
  const ModelPoint q = normalize_point(cone, std::get<ModelPoint>(t));
  const auto qc = to_product(cone, q);
  const ModelPoint wq =
      normalize_point(factor, ModelPoint::cone_point(qc.radius, qc.base));
  const double dh = qc.h - pc.h;
  const double dw = distance(factor, wp, wq);
  const double d3 = std::hypot(dh, dw);
  require(d3 > 0.0, "angle target coincides with the foot point");
  if (dw == 0.0) return {dh > 0.0 ? 1.0 : -1.0, 0.0, 0.0};
  const auto d2 = planar_dir_to_point(factor, wp, wq);
  return {dh / d3, (dw / d3) * d2[0], (dw / d3) * d2[1]};
}

double base_coordinate(const SpaceDescriptor& cone, const AngleTarget& t) {
  if (std::holds_alternative<IdealPoint>(t))
    return std::get<IdealPoint>(t).direction.a;
  const ModelPoint q = normalize_point(cone, std::get<ModelPoint>(t));
  require(!is_apex(q), "angle target coincides with the foot point");
  return q.base_ref().a;
}

}  // namespace

double angle_at(const SpaceDescriptor& cone, const ModelPoint& p0,
                const AngleTarget& a, const AngleTarget& b) {
  require(cone.kind() == SpaceKind::EuclideanCone, "angle_at requires a cone");
  const ModelPoint p = normalize_point(cone, p0);

  if (suspension_base(cone)) {
    const SpaceDescriptor factor = factor_cone(cone);
    const auto pc = to_product(cone, p);
    if (pc.radius == 0.0) {
      // Axis point (including the apex): the direction space is
      // suspension(circle(L)); the apex additionally truncates at pi,
      // which the suspension law already satisfies.
      const AxisDir da = axis_dir_to(cone, factor, p, a);
      const AxisDir db = axis_dir_to(cone, factor, p, b);
      return axis_angle(cone.base().base(), da.sigma, da.base, db.sigma,
                        db.base);
    }
    const ModelPoint wp =
        normalize_point(factor, ModelPoint::cone_point(pc.radius, pc.base));
    const auto va = product_dir_to(cone, factor, p, wp, a);
    const auto vb = product_dir_to(cone, factor, p, wp, b);
    return angle_between_3d(va, vb);
  }

  require(circle_base(cone), "angle_at supports circle bases and product "
                             "decompositions over suspensions");

  if (is_apex(p)) {
    const double L = cone.base().circle_length();
    const double ca = base_coordinate(cone, a);
    const double cb = base_coordinate(cone, b);
    double d = std::fabs(ca - cb);
    if (d > L / 2.0) d = L - d;
    return std::min(d, kPi);
  }

  const auto dir = [&](const AngleTarget& t) -> std::array<double, 2> {
    if (std::holds_alternative<IdealPoint>(t))
      return planar_dir_to_ideal(cone, p,
                                 std::get<IdealPoint>(t).direction);
    const ModelPoint q = normalize_point(cone, std::get<ModelPoint>(t));
    require(distance(cone, p, q) > 0.0,
            "angle target coincides with the foot point");
    return planar_dir_to_point(cone, p, q);
  };
  return angle_between_2d(dir(a), dir(b));
}

DirectionDescriptor direction_at(const SpaceDescriptor& cone,
                                 const ModelPoint& p0, const AngleTarget& a) {
  require(circle_base(cone), "direction_at supports circle bases");
  const ModelPoint p = normalize_point(cone, p0);
  DirectionDescriptor dd;
  dd.foot = p;
  if (is_apex(p)) {
    dd.space_length = cone.base().circle_length();
    dd.angle = wrap_angle(base_coordinate(cone, a), dd.space_length);
    return dd;
  }
  dd.space_length = 2.0 * kPi;
  std::array<double, 2> v;
  if (std::holds_alternative<IdealPoint>(a)) {
    v = planar_dir_to_ideal(cone, p, std::get<IdealPoint>(a).direction);
  } else {
    const ModelPoint q = normalize_point(cone, std::get<ModelPoint>(a));
    require(distance(cone, p, q) > 0.0,
            "angle target coincides with the foot point");
    v = planar_dir_to_point(cone, p, q);
  }
  dd.angle = wrap_angle(std::atan2(v[1], v[0]), 2.0 * kPi);
  return dd;
}

std::string point_to_string(const ModelPoint& p) {
  char buf[64];
  switch (p.kind) {
    case PointKind::Circle:
      std::snprintf(buf, sizeof(buf), "angle:%.17g", p.a);
      return buf;
    case PointKind::Graph:
      std::snprintf(buf, sizeof(buf), "edge:%d@%.17g", p.edge, p.offset);
      return buf;
    case PointKind::Suspension:
      std::snprintf(buf, sizeof(buf), "polar:%.17g;", p.a);
      return buf + point_to_string(p.base_ref());
    case PointKind::Cone:
      std::snprintf(buf, sizeof(buf), "radius:%.17g;", p.a);
      return buf + point_to_string(p.base_ref());
    case PointKind::Vector: {
      std::string s = "vec:";
      for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (i) s += ' ';
        std::snprintf(buf, sizeof(buf), "%.17g", p.coords[i]);
        s += buf;
      }
      return s;
    }
  }
  throw ContractViolation("unknown point kind");
}

std::string breakpoint_csv(const GeodesicPath& path) {
  std::string out = "parameter,point\n";
  char buf[48];
  for (const auto& [s, p] : path.breakpoints) {
    std::snprintf(buf, sizeof(buf), "%.17g,", s);
    out += buf;
    out += point_to_string(p);
    out += '\n';
  }
  return out;
}

ProductCoords to_product(const SpaceDescriptor& cone_over_susp,
                         const ModelPoint& p0) {
  require(suspension_base(cone_over_susp),
          "to_product requires a cone over a suspension");
  const ModelPoint p = normalize_point(cone_over_susp, p0);
  ProductCoords pc;
  if (is_apex(p)) {
    pc.base = canonical_point(cone_over_susp.base().base());
    return pc;
  }
  const double t = p.a;
  const double s = p.base_ref().a;
  pc.h = t * std::cos(s);
  pc.radius = t * std::sin(s);
  if (s == 0.0 || s == kPi) {
    pc.h = s == 0.0 ? t : -t;
    pc.radius = 0.0;
  }
  pc.base = pc.radius == 0.0 ? canonical_point(cone_over_susp.base().base())
                             : p.base_ref().base_ref();
  return pc;
}

ModelPoint from_product(const SpaceDescriptor& cone_over_susp,
                        const ProductCoords& pc) {
  require(suspension_base(cone_over_susp),
          "from_product requires a cone over a suspension");
  require(pc.radius >= 0.0, "product radius must be nonnegative");
  const double t = std::hypot(pc.h, pc.radius);
  if (t == 0.0)
    return normalize_point(
        cone_over_susp,
        ModelPoint::cone_point(
            0.0, canonical_point(cone_over_susp.base())));
  const double s = std::atan2(pc.radius, pc.h);
  return normalize_point(
      cone_over_susp,
      ModelPoint::cone_point(
          t, ModelPoint::suspension_point(s, pc.base)));
}

}  // namespace catasym
