#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catasym/metric.hpp"
#include "catasym/space.hpp"

namespace catasym {

/// Curvature admissibility of a CAT(1) candidate model: girth criterion for
/// 1-dimensional variants, plus geodesic completeness.
struct AdmissibilityReport {
  bool cat1 = false;
  bool geodesically_complete = false;
  double shortest_cycle = 0.0;  // witness when finite (graphs, circles)
  std::string witness;
};

AdmissibilityReport admits_cat1(const SpaceDescriptor& space);

struct AntipodeReport {
  ModelPoint query;
  double tolerance = 0.0;
  std::vector<std::size_t> candidate_indices;  // into the sample
  std::vector<ModelPoint> candidates;          // d(query, .) >= pi - tol
};

AntipodeReport antipode_set(const SpaceDescriptor& space, const ModelPoint& z,
                            const SampleSet& sample, double tol);

/// Sample points z with min over A of d(z, a) >= pi/2 - tol.
std::vector<ModelPoint> polar_set(const SpaceDescriptor& space,
                                  const std::vector<ModelPoint>& A,
                                  const SampleSet& sample, double tol);

/// An m-tuple with opposite m-tuple and the certified defect. The sup of
/// d(p_i, z) + d(z, q_i) over the whole space is bounded by the sample sup
/// plus 2 * mesh (the sum is 1-Lipschitz in z).
struct SuspenderCertificate {
  int m = 0;
  std::vector<std::size_t> p_indices;
  std::vector<std::size_t> q_indices;
  std::vector<ModelPoint> p_tuple;
  std::vector<ModelPoint> q_tuple;
  double delta = 0.0;
  double sample_mesh = 0.0;
  std::vector<double> sup_raw;        // per-slot sample sup of the sums
  std::vector<double> sup_certified;  // sup_raw + 2 * mesh
  double max_pairwise = 0.0;          // over all cross distances
  double min_pairwise = 0.0;
};

struct SuspenderSearchStats {
  std::uint64_t evaluations = 0;
  bool exhausted = false;         // the direct search ran to completion
  bool coarse_refuted = false;    // nonexistence certified on a coarse subnet
  bool rank_refuted = false;      // nonexistence certified by the Gram bound
};

/// Exhaustive lexicographic search for an (m, delta)-suspender over sample
/// tuples, pruned by pairwise-distance windows. Returns the first tuple (in
/// lexicographic index order) whose mesh-corrected residuals pass, or
/// nullopt when the search space is provably empty. Throws BudgetError when
/// neither conclusion is reached within the budget.
std::optional<SuspenderCertificate> find_suspender(
    const SpaceDescriptor& space, const SampleSet& sample, int m, double delta,
    std::uint64_t budget = 50'000'000, SuspenderSearchStats* stats = nullptr);

struct SuspenderConclusionReport {
  std::vector<double> inf_sums;  // per slot, over the sample
  double min_sum_slack = 0.0;    // inf_sums - (pi - delta - 2*mesh)
  double min_pairwise = 0.0;
  double min_pairwise_slack = 0.0;  // min_pairwise - (pi/2 - 2*delta)
  bool pass = false;
};

/// Checks the inequality conclusions that valid certificates must satisfy:
/// slot sums stay above pi - delta (mesh-corrected) and cross distances
/// above pi/2 - 2*delta.
SuspenderConclusionReport verify_suspender_conclusions(
    const SpaceDescriptor& space, const SuspenderCertificate& cert,
    const SampleSet& sample);

struct SuspenderOrderResult {
  int order = 0;
  /// How the first failing order was ruled out.
  enum class Refutation { Exhaustive, RankCertificate, Budget } refutation =
      Refutation::Exhaustive;
};

/// Largest m for which find_suspender succeeds within the budget.
SuspenderOrderResult max_suspender_order(const SpaceDescriptor& space,
                                         const SampleSet& sample, double delta,
                                         std::uint64_t budget = 50'000'000);

/// min over sample z of max_i |d(p_i, z) - pi/2| for a full-order tuple.
double fullsusp_gap(const SpaceDescriptor& space, const SampleSet& sample,
                    const SuspenderCertificate& cert);

struct AperpReport {
  bool empty_domain = false;  // no sampled pair within delta of pi/2
  double worst = 0.0;  // max |sum_i cos d(p_i,z1) cos d(p_i,z2)|
  std::size_t pair_count = 0;
};

/// Near-orthogonality residual of the cosine vector over sampled pairs with
/// |d(z1, z2) - pi/2| < delta.
AperpReport aperp_check(const SpaceDescriptor& space, const SampleSet& sample,
                        const SuspenderCertificate& cert, double delta);

/// Max residual between measured distances and the spherical-join formula
/// in the split coordinates induced by an exact suspender (delta <= 1e-9).
double verify_join_splitting(const SpaceDescriptor& space,
                             const SampleSet& sample,
                             const SuspenderCertificate& cert);

}  // namespace catasym
