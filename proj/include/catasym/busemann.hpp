#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "catasym/cone.hpp"
#include "catasym/metric.hpp"
#include "catasym/space.hpp"

namespace catasym {

/// Busemann function along the apex ray toward xi. The closed form
/// -s * cos((d_base ^ pi)(xi, x)) holds on every cone model; the limit
/// evaluator d(p, (t_max, xi)) - t_max is kept as an independent oracle.
struct BusemannFunction {
  enum class Mode { ClosedForm, Limit };

  std::shared_ptr<const SpaceDescriptor> cone;
  IdealPoint xi;
  Mode mode = Mode::ClosedForm;
  double t_max = 1e6;
};

BusemannFunction make_busemann(const SpaceDescriptor& cone,
                               const IdealPoint& xi,
                               BusemannFunction::Mode mode =
                                   BusemannFunction::Mode::ClosedForm,
                               double t_max = 1e6);

double busemann_eval(const BusemannFunction& bf, const ModelPoint& p);

struct HoroballReport {
  double predicted = 0.0;  // b(p) + r
  double measured = 0.0;   // min distance to the sampled boundary band
  double residual = 0.0;
  std::size_t boundary_samples = 0;
  double mesh = 0.0;
};

/// Checks d(p, {b <= -r}) = b(p) + r by sampling the level band
/// |b + r| <= mesh on a capped net. Requires b(p) > -r.
HoroballReport horoball_identity_check(const BusemannFunction& bf,
                                       const ModelPoint& p, double r,
                                       double mesh = 0.02,
                                       std::uint64_t seed = 1);

struct FirstVariationReport {
  double forward_difference = 0.0;
  double angle = 0.0;
  double residual = 0.0;  // |fd + cos(angle)|
  bool step_degenerate = false;  // geodesic hits the apex within [0, h]
};

/// Forward-difference right derivative of b along the unit-speed geodesic
/// x -> y against -cos angle_x(xi, y).
FirstVariationReport first_variation_check(const SpaceDescriptor& cone,
                                           const BusemannFunction& bf,
                                           const ModelPoint& x,
                                           const ModelPoint& y,
                                           double h = 1e-6);

struct LevelAngleReport {
  std::size_t level_pairs = 0;
  double max_level_angle = 0.0;  // must stay <= pi/2 + 1e-9
  double min_level_angle = 0.0;  // must stay > pi/2 - 2*delta - correction
  std::size_t checked_pairs = 0;
  double min_angle_sum = 0.0;  // over all pairs; > pi - 2*delta
  double max_angle_sum = 0.0;  // <= pi + 1e-9
};

/// Level-set and angle-sum bounds for pairs from the sample, given a
/// certified strainer defect delta for xi. Throws when the sample holds no
/// level pairs.
LevelAngleReport level_set_angle_check(const SpaceDescriptor& cone,
                                       const BusemannFunction& bf,
                                       const SampleSet& sample, double delta,
                                       std::size_t pair_budget = 2'000'000,
                                       std::uint64_t seed = 1);

}  // namespace catasym
