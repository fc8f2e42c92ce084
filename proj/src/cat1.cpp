#include "catasym/cat1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace catasym {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

/// Shortest cycle length of a metric graph: for each edge, the shortest
/// path between its endpoints avoiding that edge instance, plus its length.
double graph_girth(const SpaceDescriptor& g, std::string* witness) {
  const auto& edges = g.edges();
  const int n = g.vertex_count();
  double best = kInf;
  int best_edge = -1;
  for (std::size_t skip = 0; skip < edges.size(); ++skip) {
    if (edges[skip].u == edges[skip].v) {
      if (edges[skip].length < best) {
        best = edges[skip].length;
        best_edge = static_cast<int>(skip);
      }
      continue;
    }
    // Dijkstra from u to v with edge `skip` removed.
    std::vector<double> dist(n, kInf);
    std::vector<char> done(n, 0);
    dist[edges[skip].u] = 0.0;
    for (;;) {
      int u = -1;
      double du = kInf;
      for (int i = 0; i < n; ++i)
        if (!done[i] && dist[i] < du) {
          du = dist[i];
          u = i;
        }
      if (u < 0) break;
      done[u] = 1;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (e == skip) continue;
        int w = -1;
        if (edges[e].u == u) w = edges[e].v;
        else if (edges[e].v == u) w = edges[e].u;
        else continue;
        dist[w] = std::min(dist[w], du + edges[e].length);
      }
    }
    const double cyc = dist[edges[skip].v] + edges[skip].length;
    if (cyc < best) {
      best = cyc;
      best_edge = static_cast<int>(skip);
    }
  }
  if (witness) {
    std::ostringstream os;
    if (best_edge >= 0)
      os << "shortest cycle through edge " << best_edge << " has length "
         << best;
    else
      os << "acyclic";
    *witness = os.str();
  }
  return best;
}

bool graph_geodesically_complete(const SpaceDescriptor& g) {
  std::vector<int> degree(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    ++degree[e.u];
    ++degree[e.v];
    if (e.u == e.v) ++degree[e.u];  // self-loop contributes twice
  }
  for (int d : degree)
    if (d <= 1) return false;
  return true;
}

/// Dimension k when the model is isometric to the round sphere S^k by
/// construction; -1 otherwise.
int sphere_model_dim(const SpaceDescriptor& space) {
  switch (space.kind()) {
    case SpaceKind::RoundSphere:
      return space.dim();
    case SpaceKind::Circle:
      return std::fabs(space.circle_length() - 2.0 * kPi) <= 1e-12 ? 1 : -1;
    case SpaceKind::Suspension:
      if (space.base().kind() == SpaceKind::Circle &&
          std::fabs(space.base().circle_length() - 2.0 * kPi) <= 1e-12)
        return 2;
      return -1;
    default:
      return -1;
  }
}

}  // namespace

AdmissibilityReport admits_cat1(const SpaceDescriptor& space) {
  AdmissibilityReport r;
  switch (space.kind()) {
    case SpaceKind::Circle: {
      r.shortest_cycle = space.circle_length();
      r.cat1 = r.shortest_cycle >= 2.0 * kPi;
      r.geodesically_complete = true;
      r.witness = "circle of length " + std::to_string(r.shortest_cycle);
      return r;
    }
    case SpaceKind::MetricGraph: {
      r.shortest_cycle = graph_girth(space, &r.witness);
      r.cat1 = r.shortest_cycle >= 2.0 * kPi;
      r.geodesically_complete = graph_geodesically_complete(space);
      return r;
    }
    case SpaceKind::Suspension: {
      require(space.base().kind() == SpaceKind::Circle,
              "admits_cat1 supports suspensions over circles");
      r.shortest_cycle = space.base().circle_length();
      r.cat1 = r.shortest_cycle >= 2.0 * kPi;
      r.geodesically_complete = true;
      r.witness =
          "suspension over circle of length " + std::to_string(r.shortest_cycle);
      return r;
    }
    case SpaceKind::RoundSphere: {
      r.cat1 = true;
      r.geodesically_complete = true;
      r.shortest_cycle = 2.0 * kPi;
      r.witness = "round sphere";
      return r;
    }
    default:
      throw ContractViolation("admits_cat1: unsupported variant");
  }
}

AntipodeReport antipode_set(const SpaceDescriptor& space, const ModelPoint& z,
                            const SampleSet& sample, double tol) {
  require(!sample.points.empty(), "antipode_set requires a nonempty sample");
  AntipodeReport r;
  r.query = normalize_point(space, z);
  r.tolerance = tol;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    if (distance(space, r.query, sample.points[i]) >= kPi - tol) {
      r.candidate_indices.push_back(i);
      r.candidates.push_back(sample.points[i]);
    }
  }
  return r;
}

std::vector<ModelPoint> polar_set(const SpaceDescriptor& space,
                                  const std::vector<ModelPoint>& A,
                                  const SampleSet& sample, double tol) {
  require(!A.empty(), "polar_set requires a nonempty point set");
  require(!sample.points.empty(), "polar_set requires a nonempty sample");
  std::vector<ModelPoint> out;
  for (const auto& z : sample.points) {
    double dmin = kInf;
    for (const auto& a : A) dmin = std::min(dmin, distance(space, z, a));
    if (dmin >= kPi / 2.0 - tol) out.push_back(z);
  }
  return out;
}

namespace {

/// Lexicographic depth-first tuple search. Candidate slot pairs must pass
/// the axis windows and the mesh-corrected sup bound; cross distances must
/// stay inside the pairwise windows. Distance evaluations are budgeted.
struct SuspenderSearch {
  const SpaceDescriptor& space;
  const std::vector<ModelPoint>& pts;
  double mesh;
  int m;
  double delta;
  // Raw sample sup must stay below this for a certified slot pair.
  double sup_thresh;
  double pair_lo;
  double pair_hi;
  double axis_lo;
  std::uint64_t budget;

  std::uint64_t evals = 0;
  bool budget_hit = false;
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best_partial;
  std::unordered_map<std::uint64_t, double> sup_cache;

  bool spend(std::uint64_t n) {
    evals += n;
    if (evals > budget) budget_hit = true;
    return budget_hit;
  }

  double dist(std::size_t i, std::size_t j) {
    return distance(space, pts[i], pts[j]);
  }

  double slot_sup(std::size_t p, std::size_t q) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint64_t>(q);
    if (auto it = sup_cache.find(key); it != sup_cache.end())
      return it->second;
    double sup = 0.0;
    for (std::size_t z = 0; z < pts.size(); ++z) {
      sup = std::max(sup, dist(p, z) + dist(z, q));
      if (spend(2) || sup >= sup_thresh) {
        if (sup >= sup_thresh) sup = kInf;
        break;
      }
    }
    sup_cache[key] = sup;
    sup_cache[(static_cast<std::uint64_t>(q) << 32) |
              static_cast<std::uint64_t>(p)] = sup;
    return sup;
  }

  bool compatible(std::size_t x) {
    for (std::size_t c : chosen) {
      if (spend(1)) return false;
      const double d = dist(x, c);
      if (!(d > pair_lo && d < pair_hi)) return false;
    }
    return true;
  }

  /// Returns true when the search should stop (found or budget).
  bool dfs(int slot, std::optional<SuspenderCertificate>& found) {
    if (slot == m) {
      found = build_certificate();
      return true;
    }
    const std::size_t n = pts.size();
    for (std::size_t p = 0; p < n; ++p) {
      if (budget_hit) return true;
      if (std::find(chosen.begin(), chosen.end(), p) != chosen.end()) continue;
      if (!compatible(p)) continue;
      for (std::size_t q = 0; q < n; ++q) {
        if (budget_hit) return true;
        if (q == p) continue;
        if (std::find(chosen.begin(), chosen.end(), q) != chosen.end())
          continue;
        if (spend(1)) return true;
        const double dpq = dist(p, q);
        if (dpq <= axis_lo || dpq >= sup_thresh) continue;
        if (!compatible(q)) continue;
        if (slot_sup(p, q) >= sup_thresh) continue;
        chosen.push_back(p);
        chosen.push_back(q);
        if (chosen.size() > best_partial.size()) best_partial = chosen;
        if (dfs(slot + 1, found)) return true;
        chosen.pop_back();
        chosen.pop_back();
      }
    }
    return false;
  }

  SuspenderCertificate build_certificate() {
    SuspenderCertificate c;
    c.m = m;
    c.delta = delta;
    c.sample_mesh = mesh;
    for (int i = 0; i < m; ++i) {
      c.p_indices.push_back(chosen[2 * i]);
      c.q_indices.push_back(chosen[2 * i + 1]);
      c.p_tuple.push_back(pts[chosen[2 * i]]);
      c.q_tuple.push_back(pts[chosen[2 * i + 1]]);
      double sup = 0.0;
      for (std::size_t z = 0; z < pts.size(); ++z)
        sup = std::max(sup,
                       dist(chosen[2 * i], z) + dist(z, chosen[2 * i + 1]));
      c.sup_raw.push_back(sup);
      c.sup_certified.push_back(sup + 2.0 * mesh);
    }
    c.max_pairwise = 0.0;
    c.min_pairwise = kInf;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        if (i / 2 == j / 2) continue;  // same slot: the axis pair
        const double d = dist(chosen[i], chosen[j]);
        c.max_pairwise = std::max(c.max_pairwise, d);
        c.min_pairwise = std::min(c.min_pairwise, d);
      }
    if (chosen.size() <= 2) c.min_pairwise = 0.0;
    return c;
  }

  std::string partial_string() const {
    std::ostringstream os;
    os << "best partial tuple:";
    for (std::size_t i : best_partial) os << ' ' << i;
    return os.str();
  }
};

/// Gram-rank refutation on models isometric to a round sphere: m unit
/// vectors with pairwise |cos d| <= sin(2*delta) have a strictly diagonally
/// dominant Gram matrix, hence are linearly independent, which is
/// impossible in R^(k+1) for m > k+1.
bool rank_refutes(const SpaceDescriptor& space, int m, double delta) {
  const int k = sphere_model_dim(space);
  if (k < 0 || m <= k + 1) return false;
  return 1.0 - (m - 1) * std::sin(2.0 * delta + 1e-6) > 0.0;
}

/// Deterministic farthest-point subsample of the given sample; returns the
/// chosen indices and the subnet mesh measured over the fine sample.
std::pair<std::vector<std::size_t>, double> farthest_point_subnet(
    const SpaceDescriptor& space, const std::vector<ModelPoint>& pts,
    std::size_t target) {
  std::vector<std::size_t> chosen{0};
  std::vector<double> mind(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    mind[i] = distance(space, pts[0], pts[i]);
  while (chosen.size() < std::min(target, pts.size())) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (mind[i] > mind[far]) far = i;
    if (mind[far] <= 0.0) break;
    chosen.push_back(far);
    for (std::size_t i = 0; i < pts.size(); ++i)
      mind[i] = std::min(mind[i], distance(space, pts[far], pts[i]));
  }
  double mesh = 0.0;
  for (double d : mind) mesh = std::max(mesh, d);
  return {std::move(chosen), mesh};
}

/// Refutes existence on the fine net by showing that even the relaxed
/// pairwise-window m-clique (a necessary condition for a suspender moved
/// onto the coarse subnet) does not exist there.
bool coarse_clique_refutes(const SpaceDescriptor& space,
                           const SampleSet& sample, int m, double delta,
                           std::uint64_t budget) {
  auto [idx, mesh_c_sample] =
      farthest_point_subnet(space, sample.points, 1500);
  const double mesh_c = mesh_c_sample + sample.mesh;
  const std::size_t n = idx.size();
  if (n < 2) return false;
  const double lo = kPi / 2.0 - 2.0 * delta - 2.0 * mesh_c - 1e-9;
  const double hi = kPi / 2.0 + delta + 2.0 * mesh_c + 1e-9;
  const double axis_lo = kPi - delta - 2.0 * mesh_c - 1e-9;

  // Distance matrix and window bitsets on the subnet.
  std::vector<double> dmat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      dmat[i * n + j] =
          distance(space, sample.points[idx[i]], sample.points[idx[j]]);
  std::vector<char> axis_capable(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && dmat[i * n + j] > axis_lo) {
        axis_capable[i] = 1;
        break;
      }
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> window(n * words, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = dmat[i * n + j];
      if (j != i && axis_capable[j] && d > lo && d < hi)
        window[i * words + j / 64] |= (1ULL << (j % 64));
    }

  std::uint64_t ops = 0;
  // Recursive clique extension over candidate bitsets.
  std::vector<std::uint64_t> cand(words);
  std::function<bool(int, std::vector<std::uint64_t>&, std::size_t)> extend =
      [&](int depth, std::vector<std::uint64_t>& cands,
          std::size_t min_index) -> bool {
    if (depth == m) return true;  // clique found: refutation fails
    for (std::size_t w = min_index / 64; w < words; ++w) {
      std::uint64_t bits = cands[w];
      if (w == min_index / 64) bits &= ~((1ULL << (min_index % 64)) - 1);
      while (bits) {
        const unsigned b = static_cast<unsigned>(__builtin_ctzll(bits));
        bits &= bits - 1;
        const std::size_t v = w * 64 + b;
        std::vector<std::uint64_t> next(words);
        for (std::size_t k = 0; k < words; ++k)
          next[k] = cands[k] & window[v * words + k];
        ops += words;
        if (ops > budget) return true;  // inconclusive counts as non-refuted
        if (extend(depth + 1, next, v + 1)) return true;
      }
    }
    return false;
  };
  for (std::size_t k = 0; k < words; ++k) {
    cand[k] = 0;
    for (std::size_t j = k * 64; j < std::min(n, (k + 1) * 64); ++j)
      if (axis_capable[j]) cand[k] |= (1ULL << (j % 64));
  }
  return !extend(0, cand, 0) && ops <= budget;
}

}  // namespace

std::optional<SuspenderCertificate> find_suspender(
    const SpaceDescriptor& space, const SampleSet& sample, int m, double delta,
    std::uint64_t budget, SuspenderSearchStats* stats) {
  require(m >= 1, "find_suspender requires m >= 1");
  require(delta > 0.0 && delta < 1.0, "find_suspender requires delta in (0,1)");
  require(!sample.points.empty(), "find_suspender requires a sample");
  require(admits_cat1(space).cat1, "find_suspender requires a CAT(1) model");

  SuspenderSearch s{space,
                    sample.points,
                    sample.mesh,
                    m,
                    delta,
                    kPi + delta - 2.0 * sample.mesh,
                    kPi / 2.0 - 2.0 * delta - 1e-12,
                    kPi / 2.0 + delta,
                    kPi - delta,
                    budget,
                    0,
                    false,
                    {},
                    {},
                    {}};
  std::optional<SuspenderCertificate> found;
  s.dfs(0, found);
  if (stats) stats->evaluations = s.evals;
  if (found) {
    if (stats) stats->exhausted = false;
    return found;
  }
  if (!s.budget_hit) {
    if (stats) stats->exhausted = true;
    return std::nullopt;
  }
  if (rank_refutes(space, m, delta)) {
    if (stats) stats->rank_refuted = true;
    return std::nullopt;
  }
  if (coarse_clique_refutes(space, sample, m, delta, budget)) {
    if (stats) stats->coarse_refuted = true;
    return std::nullopt;
  }
  throw BudgetError("find_suspender: search budget exceeded",
                    s.partial_string());
}

SuspenderConclusionReport verify_suspender_conclusions(
    const SpaceDescriptor& space, const SuspenderCertificate& cert,
    const SampleSet& sample) {
  SuspenderConclusionReport r;
  const double sum_floor = kPi - cert.delta - 2.0 * sample.mesh;
  double min_sum_slack = kInf;
  for (int i = 0; i < cert.m; ++i) {
    double inf = kInf;
    for (const auto& z : sample.points)
      inf = std::min(inf, distance(space, cert.p_tuple[i], z) +
                              distance(space, z, cert.q_tuple[i]));
    r.inf_sums.push_back(inf);
    min_sum_slack = std::min(min_sum_slack, inf - sum_floor);
  }
  r.min_sum_slack = min_sum_slack;

  double min_pair = kInf;
  const auto cross = [&](const ModelPoint& a, const ModelPoint& b) {
    min_pair = std::min(min_pair, distance(space, a, b));
  };
  for (int i = 0; i < cert.m; ++i)
    for (int j = i + 1; j < cert.m; ++j) {
      cross(cert.p_tuple[i], cert.p_tuple[j]);
      cross(cert.p_tuple[i], cert.q_tuple[j]);
      cross(cert.q_tuple[i], cert.p_tuple[j]);
      cross(cert.q_tuple[i], cert.q_tuple[j]);
    }
  r.min_pairwise = cert.m > 1 ? min_pair : 0.0;
  r.min_pairwise_slack =
      cert.m > 1 ? min_pair - (kPi / 2.0 - 2.0 * cert.delta) : 0.0;
  r.pass = r.min_sum_slack > 0.0 && (cert.m == 1 || r.min_pairwise_slack > 0.0);
  return r;
}

SuspenderOrderResult max_suspender_order(const SpaceDescriptor& space,
                                         const SampleSet& sample, double delta,
                                         std::uint64_t budget) {
  SuspenderOrderResult result;
  for (int m = 1; m <= 6; ++m) {
    SuspenderSearchStats stats;
    std::optional<SuspenderCertificate> cert;
    try {
      cert = find_suspender(space, sample, m, delta, budget, &stats);
    } catch (const BudgetError&) {
      result.order = m - 1;
      result.refutation = SuspenderOrderResult::Refutation::Budget;
      return result;
    }
    if (!cert) {
      result.order = m - 1;
      result.refutation =
          stats.rank_refuted || stats.coarse_refuted
              ? SuspenderOrderResult::Refutation::RankCertificate
              : SuspenderOrderResult::Refutation::Exhaustive;
      return result;
    }
  }
  result.order = 6;
  return result;
}

double fullsusp_gap(const SpaceDescriptor& space, const SampleSet& sample,
                    const SuspenderCertificate& cert) {
  require(!sample.points.empty(), "fullsusp_gap requires a sample");
  const auto& pts = sample.points;
  return parallel_map_reduce<double>(
      pts.size(), kInf,
      [&](std::size_t lo, std::size_t hi) {
        double gap = kInf;
        for (std::size_t z = lo; z < hi; ++z) {
          double worst = 0.0;
          for (const auto& p : cert.p_tuple)
            worst = std::max(worst,
                             std::fabs(distance(space, p, pts[z]) - kPi / 2.0));
          gap = std::min(gap, worst);
        }
        return gap;
      },
      [](double a, double b) { return std::min(a, b); });
}

AperpReport aperp_check(const SpaceDescriptor& space, const SampleSet& sample,
                        const SuspenderCertificate& cert, double delta) {
  const auto& pts = sample.points;
  const std::size_t n = pts.size();
  const int m = cert.m;
  // Cosine rows per tuple member.
  std::vector<std::vector<double>> cosines(m, std::vector<double>(n));
  for (int i = 0; i < m; ++i)
    for (std::size_t z = 0; z < n; ++z)
      cosines[i][z] = std::cos(distance(space, cert.p_tuple[i], pts[z]));

  struct Acc {
    double worst = 0.0;
    std::size_t count = 0;
  };
  const Acc acc = parallel_map_reduce<Acc>(
      n, Acc{},
      [&](std::size_t lo, std::size_t hi) {
        Acc a;
        for (std::size_t i = lo; i < hi; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            if (std::fabs(distance(space, pts[i], pts[j]) - kPi / 2.0) >=
                delta)
              continue;
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += cosines[k][i] * cosines[k][j];
            a.worst = std::max(a.worst, std::fabs(s));
            ++a.count;
          }
        return a;
      },
      [](Acc a, Acc b) {
        return Acc{std::max(a.worst, b.worst), a.count + b.count};
      });
  AperpReport r;
  r.worst = acc.worst;
  r.pair_count = acc.count;
  r.empty_domain = acc.count == 0;
  return r;
}

double verify_join_splitting(const SpaceDescriptor& space,
                             const SampleSet& sample,
                             const SuspenderCertificate& cert) {
  // The tuple itself must be exact: slot sums pinned at pi and all cross
  // distances pinned at pi/2, up to 1e-9, on the raw sample values.
  for (double s : cert.sup_raw)
    require(s <= kPi + 1e-9, "verify_join_splitting requires an exact tuple");
  if (cert.m > 1)
    require(cert.min_pairwise >= kPi / 2.0 - 1e-9 &&
                cert.max_pairwise <= kPi / 2.0 + 1e-9,
            "verify_join_splitting requires an exact tuple");

  const auto& pts = sample.points;
  const std::size_t n = pts.size();
  const int m = cert.m;

  std::vector<double> norm(n), theta(n);
  std::vector<std::vector<double>> u(n, std::vector<double>(m));
  for (std::size_t z = 0; z < n; ++z) {
    double n2 = 0.0;
    for (int i = 0; i < m; ++i) {
      u[z][i] = std::cos(distance(space, cert.p_tuple[i], pts[z]));
      n2 += u[z][i] * u[z][i];
    }
    norm[z] = std::sqrt(std::min(n2, 1.0));
    theta[z] = std::acos(std::min(std::max(norm[z], 0.0), 1.0));
  }

  // Polar factor representatives; only needed off the spanned sphere.
  std::vector<ModelPoint> tuple = cert.p_tuple;
  tuple.insert(tuple.end(), cert.q_tuple.begin(), cert.q_tuple.end());
  const std::vector<ModelPoint> polar = polar_set(space, tuple, sample, 1e-9);

  // When the polar factor is a 0-sphere (two antipodal clusters), the join
  // embeds isometrically into S^m via an extra signed coordinate, and the
  // predicted distance can be evaluated in the numerically stable atan2
  // form. Otherwise fall back to the acos form.
  bool zero_sphere_polar = !polar.empty();
  std::vector<double> polar_sign(polar.size(), 1.0);
  for (std::size_t k = 0; k < polar.size(); ++k) {
    const double d = distance(space, polar[0], polar[k]);
    if (d <= 1e-9)
      polar_sign[k] = 1.0;
    else if (d >= kPi - 1e-9)
      polar_sign[k] = -1.0;
    else
      zero_sphere_polar = false;
  }

  // Polar components below 1e-7 are rounding noise from the norm
  // computation; zeroing them keeps on-sphere points exactly on-sphere.
  std::vector<std::vector<double>> embed(n);
  std::vector<std::size_t> polar_of(n, 0);
  for (std::size_t z = 0; z < n; ++z) {
    const double s = std::sin(theta[z]);
    if (s > 1e-7) {
      if (polar.empty())
        throw ContractViolation(
            "verify_join_splitting: sample lacks polar representatives");
      polar_of[z] = nearest_sample(space, polar, pts[z]);
    }
    if (zero_sphere_polar || polar.empty()) {
      embed[z] = u[z];
      embed[z].push_back(
          s > 1e-7 && !polar.empty() ? s * polar_sign[polar_of[z]] : 0.0);
    }
  }

  return parallel_map_reduce<double>(
      n, 0.0,
      [&](std::size_t lo, std::size_t hi) {
        double worst = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
          for (std::size_t j = i + 1; j < n; ++j) {
            double predicted;
            if (!embed[i].empty()) {
              double dot = 0.0, n1 = 0.0, n2 = 0.0;
              for (int k = 0; k <= m; ++k) {
                dot += embed[i][k] * embed[j][k];
                n1 += embed[i][k] * embed[i][k];
                n2 += embed[j][k] * embed[j][k];
              }
              const double inv1 = 1.0 / std::sqrt(std::max(n1, 1e-300));
              const double inv2 = 1.0 / std::sqrt(std::max(n2, 1e-300));
              dot *= inv1 * inv2;
              double rej = 0.0;
              for (int k = 0; k <= m; ++k) {
                const double r = embed[j][k] * inv2 - dot * embed[i][k] * inv1;
                rej += r * r;
              }
              predicted = std::atan2(std::sqrt(rej), dot);
            } else {
              double c = 0.0;
              for (int k = 0; k < m; ++k) c += u[i][k] * u[j][k];
              const double si = std::sin(theta[i]), sj = std::sin(theta[j]);
              if (si * sj > 1e-12) {
                const double dperp = truncated_distance(
                    space, polar[polar_of[i]], polar[polar_of[j]]);
                c += si * sj * std::cos(dperp);
              }
              predicted = std::acos(std::min(std::max(c, -1.0), 1.0));
            }
            const double measured = distance(space, pts[i], pts[j]);
            worst = std::max(worst, std::fabs(measured - predicted));
          }
        return worst;
      },
      [](double a, double b) { return std::max(a, b); });
}

}  // namespace catasym
