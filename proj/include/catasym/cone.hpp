#pragma once

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "catasym/metric.hpp"
#include "catasym/space.hpp"

namespace catasym {

/// Planar development of a flat cone over a circle: base angles within
/// +-width of the reference angle unroll isometrically onto a plane sector,
/// the reference direction landing on the positive x axis.
struct DevelopedChart {
  double length = 0.0;           // base circle length
  double reference_angle = 0.0;  // base angle mapped to the +x axis
  double width = kPi;            // angular half-width, <= pi

  /// Signed arc from the reference to the given base angle, in (-L/2, L/2].
  double signed_arc(double base_angle) const;
  std::array<double, 2> to_plane(double radius, double base_angle) const;
  /// Back to cone coordinates; the origin maps to the apex.
  ModelPoint from_plane(const std::array<double, 2>& xy) const;
};

/// Unit-speed globally minimizing path between two cone points.
struct GeodesicPath {
  std::vector<std::pair<double, ModelPoint>> breakpoints;
  double length = 0.0;
  bool through_apex = false;
  /// Base angular distance exactly pi: the chart segment and the apex
  /// concatenation tie; the apex path is returned.
  bool apex_tie = false;

  ModelPoint eval(double s) const;

 private:
  friend GeodesicPath cone_geodesic(const SpaceDescriptor&, const ModelPoint&,
                                    const ModelPoint&);
  // Chart-segment data (empty for apex concatenations).
  std::optional<DevelopedChart> chart_;
  std::array<double, 2> plane_a_{};
  std::array<double, 2> plane_b_{};
  // Product-decomposition data (cone over a suspension).
  std::shared_ptr<const SpaceDescriptor> space_;  // C0(circle) factor
  std::shared_ptr<const GeodesicPath> leg_;
  double leg_len_ = 0.0;
  double h0_ = 0.0;
  double h1_ = 0.0;
  ModelPoint factor_point_;  // constant factor point when the leg degenerates
};

/// Unit-speed ray from a base point toward an ideal point.
struct RayPath {
  ModelPoint origin;
  IdealPoint target;

  ModelPoint eval(double t) const;

  enum class Mode { ApexRay, ChartLine, ThroughApex, Product };
  Mode mode = Mode::ApexRay;

  // ChartLine data.
  std::optional<DevelopedChart> chart;
  std::array<double, 2> plane_origin{};
  std::array<double, 2> plane_dir{};
  // ThroughApex data.
  double apex_param = 0.0;
  // Product data (cone over a suspension): h' = cos(s_xi), radial ray in the
  // base-circle cone factor scaled by sin(s_xi).
  double h0 = 0.0;
  double cos_split = 0.0;
  double sin_split = 0.0;
  std::shared_ptr<const RayPath> factor_ray;  // ray in C0(circle)
  std::shared_ptr<const SpaceDescriptor> cone_space;
  double factor_radius_ = 0.0;  // constant factor point for pole targets
  ModelPoint factor_base_;
};

/// Exact geodesic between distinct points of a cone over a circle, or of a
/// cone over a suspension via the product decomposition.
GeodesicPath cone_geodesic(const SpaceDescriptor& cone, const ModelPoint& p,
                           const ModelPoint& q);

/// The unique ray from p asymptotic to the apex ray toward xi.
RayPath asymptotic_ray(const SpaceDescriptor& cone, const ModelPoint& p,
                       const IdealPoint& xi);

using AngleTarget = std::variant<ModelPoint, IdealPoint>;

/// Angle at p between the initial directions of the geodesics/rays toward
/// the two targets, measured in the space of directions at p.
double angle_at(const SpaceDescriptor& cone, const ModelPoint& p,
                const AngleTarget& a, const AngleTarget& b);

/// Direction of the geodesic/ray from p toward the target, as an angular
/// coordinate in the space of directions at p. Off the apex the direction
/// space is a circle of length 2*pi; at the apex of a cone over circle(L)
/// it is a circle of length L. Cones over circles only.
struct DirectionDescriptor {
  ModelPoint foot;
  double angle = 0.0;         // reduced modulo the direction-space length
  double space_length = 0.0;  // 2*pi off apex, L at the apex
};

DirectionDescriptor direction_at(const SpaceDescriptor& cone,
                                 const ModelPoint& p, const AngleTarget& a);

/// Breakpoint table for plotting: one row per breakpoint with the
/// parameter value and the point's coordinates.
std::string breakpoint_csv(const GeodesicPath& path);

/// Plain-text form of a point, matching the descriptor grammar.
std::string point_to_string(const ModelPoint& p);

/// C0(suspension(Z)) ~ R x C0(Z): coordinates of the canonical isometry.
struct ProductCoords {
  double h = 0.0;       // t * cos(s)
  double radius = 0.0;  // t * sin(s)
  ModelPoint base;      // point of Z
};

ProductCoords to_product(const SpaceDescriptor& cone_over_susp,
                         const ModelPoint& p);
ModelPoint from_product(const SpaceDescriptor& cone_over_susp,
                        const ProductCoords& pc);

}  // namespace catasym
