#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catasym/metric.hpp"
#include "catasym/space.hpp"

namespace catasym {

/// Finite relation between two sample sets with its measured distortion.
struct Correspondence {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double distortion = 0.0;  // max over pair-of-pairs of |d_X - d_Y|
};

struct GHInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_provenance;
  std::string upper_provenance;
};

struct ApproximationReport {
  bool ok = false;
  double worst_distortion = 0.0;  // max additive distance error
  double worst_coverage = 0.0;    // max over Y samples of distance to image
};

/// Checks the c-approximation conditions on a sampled map: additive
/// distortion below c on all listed pairs, and the image covering the Y
/// sample within radius c (the covering radius convention is c; reported
/// in the provenance of every interval that uses it).
ApproximationReport check_c_approximation(
    const SpaceDescriptor& X, const SpaceDescriptor& Y,
    const std::vector<std::pair<ModelPoint, ModelPoint>>& map_sample,
    const std::vector<ModelPoint>& y_sample, double c);

enum class CorrespondenceFamily {
  Auto,
  Identity,
  CircleScaling,
  SuspensionSphereScaling,
  GreedyFallback,
};

/// Certified upper bound: half the distortion of the best registered
/// correspondence family for the pair, closed form where the family allows,
/// plus mesh corrections for sampled families.
struct UpperBoundResult {
  double value = 0.0;
  std::string provenance;
};

UpperBoundResult gh_upper_bound(const SpaceDescriptor& X,
                                const SpaceDescriptor& Y,
                                CorrespondenceFamily family =
                                    CorrespondenceFamily::Auto,
                                double mesh = 0.05, std::uint64_t seed = 5);

/// Certified lower bound from sample obstructions: diameter mismatch and,
/// on small samples, 3-point packing mismatch. Mesh-corrected.
struct LowerBoundResult {
  double value = 0.0;
  std::string provenance;
};

LowerBoundResult gh_lower_bound(const SpaceDescriptor& X,
                                const SampleSet& x_sample,
                                const SpaceDescriptor& Y,
                                const SampleSet& y_sample);

/// Closed-form diameter for variants where it is known.
std::optional<double> model_diameter(const SpaceDescriptor& space);

/// Two-sided GH bracket between an admissible model and the round sphere
/// S^(n-1), combining the registered upper families with the lower
/// obstructions.
GHInterval gh_to_sphere(const SpaceDescriptor& Z, int n, double mesh,
                        std::uint64_t seed = 5);

/// Greedy nearest-profile correspondence used as the fallback family; the
/// distortion it reports is an upper-bound ingredient only.
Correspondence greedy_correspondence(const SpaceDescriptor& X,
                                     const SampleSet& x_sample,
                                     const SpaceDescriptor& Y,
                                     const SampleSet& y_sample,
                                     std::uint64_t seed);

}  // namespace catasym
