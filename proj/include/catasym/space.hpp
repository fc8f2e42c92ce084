#pragma once

#include <memory>
#include <string>
#include <vector>

#include "catasym/common.hpp"

namespace catasym {

enum class SpaceKind {
  Circle,
  MetricGraph,
  Suspension,
  EuclideanCone,
  RoundSphere,
  Euclidean,
};

struct GraphEdge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

/// Parametric description of a model metric space. Immutable after
/// construction; composites share their base descriptor.
class SpaceDescriptor {
 public:
  static SpaceDescriptor circle(double length);
  static SpaceDescriptor metric_graph(int vertex_count,
                                      std::vector<GraphEdge> edges);
  static SpaceDescriptor suspension(SpaceDescriptor base);
  static SpaceDescriptor euclidean_cone(SpaceDescriptor base);
  static SpaceDescriptor round_sphere(int dim);
  static SpaceDescriptor euclidean(int dim);

  SpaceKind kind() const { return kind_; }
  double circle_length() const;
  int vertex_count() const;
  const std::vector<GraphEdge>& edges() const;
  const SpaceDescriptor& base() const;
  int dim() const;

  /// True for variants with finite diameter.
  bool bounded() const;
  /// Number of cone/suspension layers above the leaf variant.
  int composite_depth() const;

  std::string to_string() const;
  static SpaceDescriptor parse(const std::string& text);

  bool operator==(const SpaceDescriptor& other) const;

 private:
  SpaceDescriptor() = default;

  SpaceKind kind_ = SpaceKind::Circle;
  double length_ = 0.0;  // circle
  int vertex_count_ = 0;
  std::vector<GraphEdge> edges_;
  std::shared_ptr<const SpaceDescriptor> base_;  // suspension / cone
  int dim_ = 0;                                  // sphere / euclidean
};

enum class PointKind { Circle, Graph, Suspension, Cone, Vector };

/// Tagged coordinate of a point in a model space. Composite points hold an
/// immutable shared base point.
struct ModelPoint {
  PointKind kind = PointKind::Circle;
  double a = 0.0;      // circle angle / suspension polar distance / cone radius
  int edge = -1;       // graph edge id
  double offset = 0.0; // graph offset along the edge
  std::vector<double> coords;                  // sphere / euclidean
  std::shared_ptr<const ModelPoint> base;      // suspension / cone

  static ModelPoint circle_angle(double angle);
  static ModelPoint graph_point(int edge, double offset);
  static ModelPoint suspension_point(double polar, ModelPoint base_point);
  static ModelPoint cone_point(double radius, ModelPoint base_point);
  static ModelPoint vector_point(std::vector<double> x);

  const ModelPoint& base_ref() const { return *base; }
};

/// Point of the cone's base space standing for the asymptotic class of the
/// apex ray toward it.
struct IdealPoint {
  ModelPoint direction;
};

/// Canonical representative point of a space (angle 0, first edge start,
/// north pole, unit first coordinate, origin). Used as the sentinel base
/// point of apexes and suspension poles.
ModelPoint canonical_point(const SpaceDescriptor& space);

/// Validates the variant match and coordinate ranges, then applies the
/// degeneracy rules: cone radius 0 and suspension polar distance 0 or pi
/// are rewritten onto the sentinel base point; circle angles are reduced
/// modulo the length. Throws ContractViolation on mismatch.
ModelPoint normalize_point(const SpaceDescriptor& space, ModelPoint p);

/// normalize_point without the rewrite; throws if p does not belong.
void check_point(const SpaceDescriptor& space, const ModelPoint& p);

bool is_apex(const ModelPoint& p);

}  // namespace catasym
