#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catasym/cat1.hpp"
#include "oracles.hpp"

using namespace catasym;

namespace {

SpaceDescriptor theta_graph(double a, double b, double c) {
  return SpaceDescriptor::metric_graph(2, {{0, 1, a}, {0, 1, b}, {0, 1, c}});
}

SuspenderCertificate sphere_orthonormal_triple() {
  SuspenderCertificate cert;
  cert.m = 3;
  cert.delta = 1e-9;
  const auto e = [](int axis, double sign) {
    std::vector<double> x(3, 0.0);
    x[axis] = sign;
    return ModelPoint::vector_point(std::move(x));
  };
  for (int i = 0; i < 3; ++i) {
    cert.p_tuple.push_back(e(i, 1.0));
    cert.q_tuple.push_back(e(i, -1.0));
    cert.sup_raw.push_back(kPi);
    cert.sup_certified.push_back(kPi);
  }
  cert.max_pairwise = kPi / 2.0;
  cert.min_pairwise = kPi / 2.0;
  return cert;
}

}  // namespace

TEST_CASE("curvature admissibility by the girth criterion") {
  CHECK(admits_cat1(SpaceDescriptor::circle(2.0 * kPi)).cat1);
  const auto bad = admits_cat1(SpaceDescriptor::circle(6.0));
  CHECK_FALSE(bad.cat1);
  CHECK(bad.shortest_cycle == doctest::Approx(6.0));

  const auto theta = admits_cat1(theta_graph(kPi, kPi, kPi));
  CHECK(theta.cat1);
  CHECK(theta.shortest_cycle == doctest::Approx(2.0 * kPi));
  CHECK(theta.geodesically_complete);

  // A dangling edge breaks geodesic completeness.
  const auto dangling = SpaceDescriptor::metric_graph(
      3, {{0, 1, kPi}, {0, 1, kPi}, {0, 1, kPi}, {1, 2, 1.0}});
  CHECK_FALSE(admits_cat1(dangling).geodesically_complete);

  CHECK(admits_cat1(SpaceDescriptor::round_sphere(2)).cat1);
  CHECK(admits_cat1(
            SpaceDescriptor::suspension(SpaceDescriptor::circle(2.0 * kPi)))
            .cat1);
  CHECK_THROWS_AS(admits_cat1(SpaceDescriptor::euclidean(2)),
                  ContractViolation);
}

TEST_CASE("antipode sets") {
  SUBCASE("unit circle: only the antipode") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const auto rep =
        antipode_set(circle, ModelPoint::circle_angle(0.0), net, 1e-6);
    REQUIRE(rep.candidates.size() == 1);
    CHECK(rep.candidates[0].a == doctest::Approx(kPi));
  }
  SUBCASE("long circle: the antipodal arc") {
    const double L = 2.0 * kPi + 0.2;
    const auto circle = SpaceDescriptor::circle(L);
    const SampleSet net = epsilon_net(circle, 0.0, 0.002, 1);
    const auto rep =
        antipode_set(circle, ModelPoint::circle_angle(0.0), net, 1e-9);
    CHECK(!rep.candidates.empty());
    for (const auto& z : rep.candidates) {
      CHECK(z.a >= kPi - 1e-9);
      CHECK(z.a <= kPi + 0.2 + 1e-9);
    }
    // The arc has length 0.2: about 0.2/spacing samples.
    const double spacing = L / static_cast<double>(net.points.size());
    CHECK(rep.candidates.size() >=
          static_cast<std::size_t>(0.2 / spacing) - 1);
  }
  SUBCASE("theta graph junction: the other junction only") {
    const auto theta = theta_graph(kPi, kPi, kPi);
    const SampleSet net = epsilon_net(theta, 0.0, 0.01, 1);
    const auto rep =
        antipode_set(theta, ModelPoint::graph_point(0, 0.0), net, 1e-6);
    REQUIRE(!rep.candidates.empty());
    for (const auto& z : rep.candidates) {
      // Every candidate is the far junction (offset 0 or full length).
      const double off = std::min(z.offset, kPi - z.offset);
      CHECK(off <= 1e-9);
      CHECK(distance(theta, rep.query, z) >= kPi - 1e-9);
    }
  }
}

TEST_CASE("polar sets") {
  SUBCASE("sphere: equatorial band of the pole") {
    const auto sphere = SpaceDescriptor::round_sphere(2);
    const SampleSet net = epsilon_net(sphere, 0.0, 0.05, 1);
    const ModelPoint north = ModelPoint::vector_point({0.0, 0.0, 1.0});
    const auto polar = polar_set(sphere, {north}, net, 1e-9);
    CHECK(!polar.empty());
    for (const auto& z : polar)
      CHECK(distance(sphere, north, z) >= kPi / 2.0 - 1e-9);
  }
  SUBCASE("unit circle: exactly the two quarter points") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const auto polar = polar_set(
        circle,
        {ModelPoint::circle_angle(0.0), ModelPoint::circle_angle(kPi)}, net,
        1e-9);
    REQUIRE(polar.size() == 2);
    CHECK(polar[0].a == doctest::Approx(kPi / 2.0));
    CHECK(polar[1].a == doctest::Approx(3.0 * kPi / 2.0));
  }
  SUBCASE("long circle: the far arc") {
    const double L = 2.0 * kPi + 0.2;
    const auto circle = SpaceDescriptor::circle(L);
    const SampleSet net = epsilon_net(circle, 0.0, 0.002, 1);
    const auto polar =
        polar_set(circle, {ModelPoint::circle_angle(0.0)}, net, 1e-9);
    REQUIRE(!polar.empty());
    for (const auto& z : polar) {
      CHECK(z.a >= kPi / 2.0 - 1e-9);
      CHECK(z.a <= L - kPi / 2.0 + 1e-9);
    }
  }
}

TEST_CASE("suspender search on circles") {
  const double L = 2.0 * kPi + 0.2;
  const auto circle = SpaceDescriptor::circle(L);
  const SampleSet net = epsilon_net(circle, 0.0, 0.004, 1);

  SUBCASE("order 1 at delta 0.11: antipodal pair with constant sum L/2") {
    SuspenderSearchStats stats;
    const auto cert = find_suspender(circle, net, 1, 0.11, 50'000'000, &stats);
    REQUIRE(cert.has_value());
    // Closed form: the sum is constant L/2 for exact antipodal pairs.
    CHECK(cert->sup_raw[0] == doctest::Approx(L / 2.0).epsilon(1e-12));
    // Grid oracle.
    const double oracle = oracles::grid_max(
        [&](double z) {
          const ModelPoint zp = ModelPoint::circle_angle(z);
          return distance(circle, cert->p_tuple[0], zp) +
                 distance(circle, zp, cert->q_tuple[0]);
        },
        0.0, L, 20000);
    CHECK(cert->sup_raw[0] <= oracle + 1e-9);
    const auto conclusions = verify_suspender_conclusions(circle, *cert, net);
    CHECK(conclusions.pass);
    CHECK(conclusions.inf_sums[0] == doctest::Approx(L / 2.0).epsilon(1e-12));
  }
  SUBCASE("order 2 at delta 0.11 succeeds; 0.04 is refuted exhaustively") {
    const auto cert = find_suspender(circle, net, 2, 0.11);
    REQUIRE(cert.has_value());
    CHECK(cert->max_pairwise <= kPi / 2.0 + 0.11);
    CHECK(cert->min_pairwise > kPi / 2.0 - 0.22);
    const auto conclusions = verify_suspender_conclusions(circle, *cert, net);
    CHECK(conclusions.pass);

    SuspenderSearchStats stats;
    const auto none = find_suspender(circle, net, 2, 0.04, 50'000'000, &stats);
    CHECK_FALSE(none.has_value());
    CHECK(stats.exhausted);
  }
}

TEST_CASE("one-suspender defect matches the closed form (L - 2pi)/2") {
  for (double t : {0.05, 0.1, 0.2}) {
    const double L = 2.0 * kPi + t;
    const auto circle = SpaceDescriptor::circle(L);
    const SampleSet net = epsilon_net(circle, 0.0, 0.004, 1);
    // Smallest certifiable delta is (L-2pi)/2 + 2*mesh; bisect to 1e-3.
    double lo = 0.0, hi = 0.9;
    while (hi - lo > 1e-3) {
      const double mid = (lo + hi) / 2.0;
      if (find_suspender(circle, net, 1, mid))
        hi = mid;
      else
        lo = mid;
    }
    CHECK(std::fabs(hi - (t / 2.0 + 2.0 * net.mesh)) <= 2e-3);
  }
}

TEST_CASE("max suspender order") {
  SUBCASE("unit circle caps at 2, refuted exhaustively") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const auto res = max_suspender_order(circle, net, 0.05);
    CHECK(res.order == 2);
    CHECK(res.refutation == SuspenderOrderResult::Refutation::Exhaustive);
  }
  SUBCASE("suspension of the unit circle caps at 3") {
    const auto susp =
        SpaceDescriptor::suspension(SpaceDescriptor::circle(2.0 * kPi));
    const SampleSet net = epsilon_net(susp, 0.0, 0.02, 1);
    const auto res = max_suspender_order(susp, net, 0.05, 3'000'000);
    CHECK(res.order == 3);
    CHECK(res.refutation != SuspenderOrderResult::Refutation::Budget);
  }
  SUBCASE("order is monotone in delta") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi + 0.2);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    int prev = 10;
    for (double delta : {0.3, 0.15, 0.05}) {
      const auto res = max_suspender_order(circle, net, delta);
      CHECK(res.order <= prev);
      prev = res.order;
    }
  }
}

TEST_CASE("full-order gap stays away from zero") {
  SUBCASE("unit circle with the quarter tuple: gap is pi/4") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    SuspenderCertificate cert;
    cert.m = 2;
    cert.delta = 1e-9;
    cert.p_tuple = {ModelPoint::circle_angle(0.0),
                    ModelPoint::circle_angle(kPi / 2.0)};
    cert.q_tuple = {ModelPoint::circle_angle(kPi),
                    ModelPoint::circle_angle(3.0 * kPi / 2.0)};
    const double gap = fullsusp_gap(circle, net, cert);
    // Analytic min-max on the circle, attained at pi/4 and 5pi/4.
    CHECK(std::fabs(gap - kPi / 4.0) <= 2.0 * net.mesh);
    const double oracle = oracles::grid_min(
        [&](double z) {
          const ModelPoint zp = ModelPoint::circle_angle(z);
          double worst = 0.0;
          for (const auto& p : cert.p_tuple)
            worst = std::max(worst,
                             std::fabs(distance(circle, p, zp) - kPi / 2.0));
          return worst;
        },
        0.0, 2.0 * kPi, 20000);
    CHECK(std::fabs(gap - oracle) <= 2.0 * net.mesh);
  }
  SUBCASE("sphere with the orthonormal triple: gap above 0.6") {
    const auto sphere = SpaceDescriptor::round_sphere(2);
    const SampleSet net = epsilon_net(sphere, 0.0, 0.02, 1);
    const double gap = fullsusp_gap(sphere, net, sphere_orthonormal_triple());
    CHECK(gap > 0.6);
  }
  SUBCASE("long circle with the certified tuple: gap above 0.5") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi + 0.2);
    const SampleSet net = epsilon_net(circle, 0.0, 0.004, 1);
    const auto cert = find_suspender(circle, net, 2, 0.11);
    REQUIRE(cert.has_value());
    CHECK(fullsusp_gap(circle, net, *cert) > 0.5);
  }
}

TEST_CASE("near-orthogonality of the cosine vectors") {
  SUBCASE("sphere: the sum is the inner product, zero at right angles") {
    const auto sphere = SpaceDescriptor::round_sphere(2);
    const auto cert = sphere_orthonormal_triple();
    // Direct evaluation at an exactly orthogonal pair.
    const ModelPoint z1 = ModelPoint::vector_point({0.0, 0.0, 1.0});
    const ModelPoint z2 = ModelPoint::vector_point({1.0, 0.0, 0.0});
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
      sum += std::cos(distance(sphere, cert.p_tuple[i], z1)) *
             std::cos(distance(sphere, cert.p_tuple[i], z2));
    CHECK(std::fabs(sum) <= 1e-12);

    const SampleSet net = epsilon_net(sphere, 0.0, 0.1, 1);
    const auto rep = aperp_check(sphere, net, cert, 0.05);
    CHECK_FALSE(rep.empty_domain);
    CHECK(rep.worst <= std::sin(0.05) + 1e-12);
  }
  SUBCASE("unit circle: the sum telescopes to cos of the pair distance") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    SuspenderCertificate cert;
    cert.m = 2;
    cert.delta = 1e-9;
    cert.p_tuple = {ModelPoint::circle_angle(0.0),
                    ModelPoint::circle_angle(kPi / 2.0)};
    cert.q_tuple = {ModelPoint::circle_angle(kPi),
                    ModelPoint::circle_angle(3.0 * kPi / 2.0)};
    const auto rep = aperp_check(circle, net, cert, 0.05);
    CHECK_FALSE(rep.empty_domain);
    CHECK(rep.worst <= std::sin(0.05) + 1e-12);
  }
  SUBCASE("residual decreases as the circle shortens toward 2pi") {
    double prev = 10.0;
    for (double t : {0.2, 0.1, 0.05}) {
      const auto circle = SpaceDescriptor::circle(2.0 * kPi + t);
      const SampleSet net = epsilon_net(circle, 0.0, 0.004, 1);
      const auto cert = find_suspender(circle, net, 2, t / 2.0 + 0.01);
      REQUIRE(cert.has_value());
      const auto rep = aperp_check(circle, net, *cert, 0.11);
      CHECK_FALSE(rep.empty_domain);
      CHECK(rep.worst < prev);
      prev = rep.worst;
    }
    CHECK(prev <= 0.25);
  }
}

TEST_CASE("join splitting of exact suspenders") {
  SUBCASE("round sphere with the orthonormal triple") {
    const auto sphere = SpaceDescriptor::round_sphere(2);
    const SampleSet net = epsilon_net(sphere, 0.0, 0.1, 1);
    CHECK(verify_join_splitting(sphere, net, sphere_orthonormal_triple()) <=
          1e-9);
  }
  SUBCASE("suspension of the unit circle with poles plus base pair") {
    const auto susp =
        SpaceDescriptor::suspension(SpaceDescriptor::circle(2.0 * kPi));
    const SampleSet net = epsilon_net(susp, 0.0, 0.1, 1);
    SuspenderCertificate cert;
    cert.m = 2;
    cert.delta = 1e-9;
    cert.p_tuple = {
        normalize_point(susp, ModelPoint::suspension_point(
                                  0.0, ModelPoint::circle_angle(0.0))),
        ModelPoint::suspension_point(kPi / 2.0, ModelPoint::circle_angle(0.0))};
    cert.q_tuple = {
        normalize_point(susp, ModelPoint::suspension_point(
                                  kPi, ModelPoint::circle_angle(0.0))),
        ModelPoint::suspension_point(kPi / 2.0, ModelPoint::circle_angle(kPi))};
    cert.sup_raw = {kPi, kPi};
    cert.sup_certified = {kPi, kPi};
    cert.max_pairwise = kPi / 2.0;
    cert.min_pairwise = kPi / 2.0;
    CHECK(verify_join_splitting(susp, net, cert) <= 1e-9);
  }
  SUBCASE("unit circle with an antipodal pair: join of two 0-spheres") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, kPi / 40.0, 1);
    SuspenderCertificate cert;
    cert.m = 1;
    cert.delta = 1e-9;
    cert.p_tuple = {ModelPoint::circle_angle(0.0)};
    cert.q_tuple = {ModelPoint::circle_angle(kPi)};
    cert.sup_raw = {kPi};
    cert.sup_certified = {kPi};
    CHECK(verify_join_splitting(circle, net, cert) <= 1e-9);
  }
  SUBCASE("non-exact tuples are rejected") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi + 0.2);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const auto cert = find_suspender(circle, net, 1, 0.15);
    REQUIRE(cert.has_value());
    CHECK_THROWS_AS(verify_join_splitting(circle, net, *cert),
                    ContractViolation);
  }
}

TEST_CASE("error paths") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi);
  const SampleSet empty{{}, 0.01, 1};
  CHECK_THROWS_AS(
      antipode_set(circle, ModelPoint::circle_angle(0.0), empty, 1e-6),
      ContractViolation);
  CHECK_THROWS_AS(
      polar_set(circle, {ModelPoint::circle_angle(0.0)}, empty, 1e-6),
      ContractViolation);
  const SampleSet net = epsilon_net(circle, 0.0, 0.05, 1);
  CHECK_THROWS_AS(polar_set(circle, {}, net, 1e-6), ContractViolation);
  CHECK_THROWS_AS(find_suspender(SpaceDescriptor::circle(6.0), net, 1, 0.1),
                  ContractViolation);
  CHECK_THROWS_AS(find_suspender(circle, net, 0, 0.1), ContractViolation);
}

TEST_CASE("certificates found by search re-verify") {
  const std::vector<std::pair<SpaceDescriptor, double>> cases = {
      {SpaceDescriptor::circle(2.0 * kPi), 0.05},
      {SpaceDescriptor::circle(2.0 * kPi + 0.1), 0.08},
      {SpaceDescriptor::circle(2.0 * kPi + 0.2), 0.13},
  };
  for (const auto& [space, delta] : cases) {
    const SampleSet net = epsilon_net(space, 0.0, 0.004, 1);
    for (int m = 1; m <= 2; ++m) {
      const auto cert = find_suspender(space, net, m, delta);
      REQUIRE(cert.has_value());
      CHECK(verify_suspender_conclusions(space, *cert, net).pass);
    }
  }
}
