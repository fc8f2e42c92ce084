#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catasym/space.hpp"

namespace catasym {

/// Exact distance in the model space. Symmetric, nonnegative and zero only
/// for equal points after normalization. Cone and suspension variants use
/// the pi-truncated base distance inside their laws.
double distance(const SpaceDescriptor& space, const ModelPoint& p,
                const ModelPoint& q);

/// min(distance, pi).
double truncated_distance(const SpaceDescriptor& space, const ModelPoint& p,
                          const ModelPoint& q);

/// Finite stand-in for a dense subset: an eps-net together with its mesh.
struct SampleSet {
  std::vector<ModelPoint> points;
  double mesh = 0.0;
  std::uint64_t seed = 0;
};

/// Deterministic eps-net of the space (capped at region_bound for
/// unbounded variants). Every point of the capped region lies within eps
/// of some sample. Throws SizeLimitError if the net would exceed max_points.
SampleSet epsilon_net(const SpaceDescriptor& space, double region_bound,
                      double eps, std::uint64_t seed,
                      std::size_t max_points = 4'000'000);

/// Multiplies all distances by lambda. Only circle and graph variants are
/// rescalable; rescaling a cone/suspension base changes the curvature class
/// and is rejected.
SpaceDescriptor rescale(const SpaceDescriptor& space, double lambda);

struct DiameterBounds {
  double lower = 0.0;  // max pairwise sample distance
  double upper = 0.0;  // lower + 2 * mesh
};

/// Two-sided diameter bracket from a sample of a compact variant.
DiameterBounds diameter_bounds(const SpaceDescriptor& space,
                               const SampleSet& sample);

/// Seeded random point, used by probe-based checks. Cone/euclidean variants
/// require a positive region bound.
ModelPoint random_point(const SpaceDescriptor& space, double region_bound,
                        Rng& rng);

/// Index of the sample point nearest to p (lowest index on ties).
std::size_t nearest_sample(const SpaceDescriptor& space,
                           const std::vector<ModelPoint>& sample,
                           const ModelPoint& p);

}  // namespace catasym
