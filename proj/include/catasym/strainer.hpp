#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "catasym/busemann.hpp"
#include "catasym/cat1.hpp"
#include "catasym/cone.hpp"

namespace catasym {

/// An (m, delta)-strainer at infinity for a cone model: a suspender tuple
/// certified on the cone's base space, which the Tits boundary of the cone
/// is isometric to.
struct IdealStrainer {
  int m = 0;
  std::vector<IdealPoint> xi;
  std::vector<IdealPoint> eta;
  double delta = 0.0;
  SuspenderCertificate base_certificate;
};

/// Certifies a fixed candidate tuple as an ideal strainer: the suspender
/// conditions on the base sample (mesh-corrected) plus direction spot
/// checks at seeded cone points. Returns nullopt when certification fails.
std::optional<IdealStrainer> certify_ideal_strainer(
    const SpaceDescriptor& cone, const std::vector<IdealPoint>& xi,
    const std::vector<IdealPoint>& eta, const SampleSet& base_sample,
    double delta, std::uint64_t seed = 7);

/// Smallest delta (to within 1e-3, by bisection) for which the tuple
/// certifies on the given net.
std::optional<double> sharpest_certified_delta(
    const SpaceDescriptor& cone, const std::vector<IdealPoint>& xi,
    const std::vector<IdealPoint>& eta, const SampleSet& base_sample,
    std::uint64_t seed = 7);

/// Tuple of Busemann functions along the apex rays of the strainer.
struct StrainerMap {
  std::shared_ptr<const SpaceDescriptor> cone;
  IdealStrainer strainer;
  std::vector<BusemannFunction> coords;

  std::vector<double> evaluate(const ModelPoint& p) const;
};

StrainerMap make_strainer_map(const SpaceDescriptor& cone,
                              const IdealStrainer& strainer);

struct IterationTraceRow {
  int k = 0;
  double residual_l1 = 0.0;
  double residual_l2 = 0.0;
  double step_distance = 0.0;
  double ratio = 0.0;
};

struct IterationTrace {
  std::vector<IterationTraceRow> rows;
  double max_ratio = 0.0;
  double displacement = 0.0;  // d(x0, y_star)
  bool converged = false;
};

struct IterationResult {
  ModelPoint y_star;
  IterationTrace trace;
};

/// Successive approximation from the openness argument: per-coordinate
/// moves along the rays toward xi_i (to decrease the coordinate) or toward
/// the opposite eta_i (to increase it, located by root finding), iterated
/// until the residual falls under tol. Throws DivergenceError when the
/// l1 residual stops contracting, and BudgetError past max_iter.
IterationResult openness_iteration(const StrainerMap& map,
                                   const ModelPoint& x0,
                                   const std::vector<double>& u0, double tol,
                                   int max_iter = 64);

struct RegularityConstants {
  double lip = 0.0;
  double open_c = 0.0;
  std::size_t pairs = 0;
  std::size_t probes = 0;
};

/// Measured Lipschitz constant over sampled pairs and openness constant
/// d(x0, y*) / ||u0|| over iteration probes.
RegularityConstants lipschitz_and_open_constants(
    const StrainerMap& map, const std::vector<ModelPoint>& points,
    std::size_t pair_budget, std::size_t probe_count, double probe_scale,
    double tol, std::uint64_t seed);

struct FirstVariationInequalityReport {
  double max_coordinate_residual = 0.0;  // |chord slope - derivative| vs 2d
  double max_norm_residual = 0.0;        // norm version vs 2 sqrt(m) d
  double max_derivative_variation = 0.0; // vs 4 sqrt(m) d
  double max_level_coordinate_derivative = 0.0;  // vs 2d
  double max_equal_map_derivative = 0.0;         // vs 6 sqrt(m) d
  std::size_t geodesics = 0;
  std::size_t level_coordinate_cases = 0;
  std::size_t equal_map_cases = 0;
};

/// First-variation inequalities along sampled geodesics.
FirstVariationInequalityReport first_variation_inequalities_check(
    const StrainerMap& map,
    const std::vector<std::pair<ModelPoint, ModelPoint>>& endpoints);

struct BiLipschitzReport {
  double lower = 0.0;  // min ratio over separated pairs
  double upper = 0.0;  // max ratio over all scanned pairs
  std::size_t injectivity_violations = 0;
  std::size_t pairs_scanned = 0;
  double separation_floor = 0.0;
};

/// Two-sided distortion of the strainer map over sampled pairs. Pairs
/// closer than the separation floor (10 x mesh) are excluded from the
/// lower ratio and the injectivity scan.
BiLipschitzReport bilipschitz_verify(const StrainerMap& map,
                                     const std::vector<ModelPoint>& points,
                                     double mesh,
                                     std::size_t pair_budget = 20'000'000,
                                     double tol = 1e-9,
                                     std::uint64_t seed = 11);

struct SphereMapReport {
  bool normalization_failure = false;
  double min_norm = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t pairs = 0;
};

/// Distortion of z -> phi0(z)/||phi0(z)|| from the base space into the unit
/// sphere, with image distances compared against min(d_Z, pi). Pairs closer
/// than 10 x mesh are excluded from the ratios.
SphereMapReport sphere_map_distortion(const StrainerMap& map,
                                      const SampleSet& base_sample,
                                      double norm_tol = 1e-6);

}  // namespace catasym
