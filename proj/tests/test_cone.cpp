#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catasym/cone.hpp"
#include "oracles.hpp"

using namespace catasym;

namespace {

SpaceDescriptor cone_over(double L) {
  return SpaceDescriptor::euclidean_cone(SpaceDescriptor::circle(L));
}

ModelPoint pt(double r, double a) {
  return ModelPoint::cone_point(r, ModelPoint::circle_angle(a));
}

IdealPoint ideal(double a) { return {ModelPoint::circle_angle(a)}; }

}  // namespace

TEST_CASE("cone geodesics: chord, apex path, formula length") {
  SUBCASE("planar chord on the flat plane cone") {
    const auto cone = cone_over(2.0 * kPi);
    const GeodesicPath g = cone_geodesic(cone, pt(1, 0), pt(1, kPi / 2.0));
    CHECK(g.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK_FALSE(g.through_apex);
  }
  SUBCASE("wide base angle goes through the apex") {
    const auto cone = cone_over(3.0 * kPi);
    const GeodesicPath g = cone_geodesic(cone, pt(1, 0), pt(1, 1.5 * kPi));
    CHECK(g.through_apex);
    CHECK(g.length == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(is_apex(g.eval(1.0)));
  }
  SUBCASE("formula length cross-checked by a dense path oracle") {
    const auto cone = cone_over(2.0 * kPi + 0.2);
    const GeodesicPath g = cone_geodesic(cone, pt(2, 0), pt(3, 1));
    const double expected = std::sqrt(4.0 + 9.0 - 12.0 * std::cos(1.0));
    CHECK(g.length == doctest::Approx(expected).epsilon(1e-14));

    const SampleSet net = epsilon_net(cone, 3.5, 0.05, 1);
    auto pts = net.points;
    pts.push_back(normalize_point(cone, pt(2, 0)));
    pts.push_back(normalize_point(cone, pt(3, 1)));
    const double oracle = oracles::dense_path_length(
        cone, pts, pts.size() - 2, pts.size() - 1, 0.3);
    CHECK(oracle >= expected - 1e-9);
    CHECK(oracle <= expected + 0.05);
  }
  SUBCASE("degenerate input is rejected") {
    const auto cone = cone_over(2.0 * kPi);
    CHECK_THROWS_AS(cone_geodesic(cone, pt(1, 0), pt(1, 0)),
                    ContractViolation);
  }
}

TEST_CASE("geodesic paths are unit speed and globally minimizing") {
  const auto cone = cone_over(2.0 * kPi + 0.2);
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelPoint a = random_point(cone, 3.0, rng);
    const ModelPoint b = random_point(cone, 3.0, rng);
    if (distance(cone, a, b) <= 1e-12) continue;
    const GeodesicPath g = cone_geodesic(cone, a, b);
    CHECK(g.length == doctest::Approx(distance(cone, a, b)).epsilon(1e-12));
    const double s = rng.uniform(0.0, g.length);
    const double t = rng.uniform(0.0, g.length);
    const double expect = std::fabs(s - t);
    CHECK(std::fabs(distance(cone, g.eval(s), g.eval(t)) - expect) <= 1e-11);
  }
}

TEST_CASE("asymptotic rays") {
  SUBCASE("apex ray") {
    const auto cone = cone_over(2.0 * kPi);
    const RayPath ray = asymptotic_ray(
        cone, normalize_point(cone, pt(0, 0)), ideal(1.0));
    const ModelPoint at = ray.eval(2.5);
    CHECK(at.a == doctest::Approx(2.5));
    CHECK(at.base_ref().a == doctest::Approx(1.0));
  }
  SUBCASE("chart line: radius grows like the planar ray") {
    const auto cone = cone_over(2.0 * kPi);
    const RayPath ray = asymptotic_ray(cone, pt(1, 0), ideal(kPi / 2.0));
    CHECK(ray.eval(1.0).a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }
  SUBCASE("behind the apex: concatenation") {
    const auto cone = cone_over(2.0 * kPi + 0.2);
    const RayPath ray = asymptotic_ray(cone, pt(1, 0), ideal(kPi + 0.05));
    const ModelPoint at = ray.eval(2.0);
    CHECK(at.a == doctest::Approx(1.0));
    CHECK(at.base_ref().a == doctest::Approx(kPi + 0.05));
  }
  SUBCASE("rays are unit speed") {
    const auto cone = cone_over(2.0 * kPi + 0.2);
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      const ModelPoint p = random_point(cone, 2.0, rng);
      const IdealPoint xi = ideal(rng.uniform(0.0, 2.0 * kPi + 0.2));
      const RayPath ray = asymptotic_ray(cone, p, xi);
      const double s = rng.uniform(0.0, 5.0);
      const double t = s + rng.uniform(0.0, 5.0);
      CHECK(std::fabs(distance(cone, ray.eval(s), ray.eval(t)) - (t - s)) <=
            1e-11);
    }
  }
  SUBCASE("rays toward the same ideal point stay boundedly close") {
    const auto cone = cone_over(2.0 * kPi + 0.1);
    const IdealPoint xi = ideal(0.7);
    const RayPath r1 = asymptotic_ray(cone, pt(1.5, 2.0), xi);
    const RayPath r2 = asymptotic_ray(cone, pt(0.5, 4.0), xi);
    double prev = distance(cone, r1.eval(10.0), r2.eval(10.0));
    for (double t : {100.0, 1000.0}) {
      const double d = distance(cone, r1.eval(t), r2.eval(t));
      CHECK(d <= prev + 1e-9);
      prev = d;
    }
    CHECK(prev <= distance(cone, pt(1.5, 2.0), pt(0.5, 4.0)) + 2.0);
  }
}

TEST_CASE("angles at cone points") {
  SUBCASE("apex angle is the truncated base distance") {
    const auto cone = cone_over(2.0 * kPi);
    const ModelPoint apex = normalize_point(cone, pt(0, 0));
    CHECK(angle_at(cone, apex, AngleTarget{ideal(0.0)},
                   AngleTarget{ideal(kPi / 2.0)}) ==
          doctest::Approx(kPi / 2.0));
    const auto wide = cone_over(3.0 * kPi);
    const ModelPoint apex3 = normalize_point(wide, pt(0, 0));
    CHECK(angle_at(wide, apex3, AngleTarget{ideal(0.0)},
                   AngleTarget{ideal(1.2 * kPi)}) == doctest::Approx(kPi));
  }
  SUBCASE("angle between the apex direction and an asymptotic direction") {
    const auto cone = cone_over(2.0 * kPi);
    const ModelPoint p = pt(1, kPi / 4.0);
    const ModelPoint apex = normalize_point(cone, pt(0, 0));
    CHECK(angle_at(cone, p, AngleTarget{apex}, AngleTarget{ideal(0.0)}) ==
          doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-12));
  }
  SUBCASE("coincident target is rejected") {
    const auto cone = cone_over(2.0 * kPi);
    CHECK_THROWS_AS(angle_at(cone, pt(1, 0), AngleTarget{pt(1, 0)},
                             AngleTarget{ideal(0.0)}),
                    ContractViolation);
  }
}

TEST_CASE("development isometry within a chart") {
  const auto cone = cone_over(2.0 * kPi + 0.2);
  const double L = 2.0 * kPi + 0.2;
  Rng rng(15);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a1 = rng.uniform(0.0, L);
    const double offset = rng.uniform(-kPi + 1e-6, kPi - 1e-6);
    const double r1 = rng.uniform(0.01, 3.0);
    const double r2 = rng.uniform(0.01, 3.0);
    const ModelPoint p = pt(r1, a1);
    const ModelPoint q = normalize_point(cone, pt(r2, a1 + offset));
    DevelopedChart chart{L, a1, kPi};
    const auto P = chart.to_plane(r1, p.base_ref().a);
    const auto Q = chart.to_plane(r2, q.base_ref().a);
    const double planar = std::hypot(P[0] - Q[0], P[1] - Q[1]);
    REQUIRE(std::fabs(distance(cone, p, q) - planar) <= 1e-12);
  }
}

TEST_CASE("triangle angles respect flat comparison") {
  const auto cone = cone_over(2.0 * kPi + 0.3);
  Rng rng(21);
  int done = 0;
  while (done < 1000) {
    const ModelPoint a = random_point(cone, 2.0, rng);
    const ModelPoint b = random_point(cone, 2.0, rng);
    const ModelPoint c = random_point(cone, 2.0, rng);
    const double ab = distance(cone, a, b), bc = distance(cone, b, c),
                 ca = distance(cone, c, a);
    if (ab < 1e-3 || bc < 1e-3 || ca < 1e-3) continue;
    ++done;
    const double alpha =
        angle_at(cone, a, AngleTarget{b}, AngleTarget{c});
    const double beta = angle_at(cone, b, AngleTarget{a}, AngleTarget{c});
    const double gamma =
        angle_at(cone, c, AngleTarget{a}, AngleTarget{b});
    REQUIRE(alpha + beta + gamma <= kPi + 1e-9);
    // Upper curvature bound: each angle is at most its comparison angle.
    // Half-angle form keeps the comparison stable near 0 and pi.
    const auto comparison = [](double adj1, double adj2, double opp) {
      const double a = std::max(opp * opp - (adj1 - adj2) * (adj1 - adj2), 0.0);
      const double b = std::max((adj1 + adj2) * (adj1 + adj2) - opp * opp, 0.0);
      return 2.0 * std::atan2(std::sqrt(a), std::sqrt(b));
    };
    // Comparison angles from side lengths carry sqrt(eps) conditioning at
    // degenerate triangles; the margin reflects that, not the geometry.
    REQUIRE(alpha <= comparison(ab, ca, bc) + 1e-7);
    REQUIRE(beta <= comparison(ab, bc, ca) + 1e-7);
    REQUIRE(gamma <= comparison(ca, bc, ab) + 1e-7);
  }
}

TEST_CASE("apex angles equal their comparison angles") {
  const auto cone = cone_over(2.0 * kPi + 0.3);
  const ModelPoint apex = normalize_point(cone, pt(0, 0));
  Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelPoint b = random_point(cone, 2.0, rng);
    const ModelPoint c = random_point(cone, 2.0, rng);
    if (b.a < 1e-3 || c.a < 1e-3) continue;
    const double angle =
        angle_at(cone, apex, AngleTarget{b}, AngleTarget{c});
    const double opp = distance(cone, b, c);
    const double sa = std::max(opp * opp - (b.a - c.a) * (b.a - c.a), 0.0);
    const double sb = std::max((b.a + c.a) * (b.a + c.a) - opp * opp, 0.0);
    const double comparison = 2.0 * std::atan2(std::sqrt(sa), std::sqrt(sb));
    REQUIRE(angle >= comparison - 1e-7);
    REQUIRE(angle <= comparison + 1e-7);
  }
}

TEST_CASE("product decomposition of cones over suspensions") {
  const auto base = SpaceDescriptor::circle(2.0 * kPi + 0.2);
  const auto cone =
      SpaceDescriptor::euclidean_cone(SpaceDescriptor::suspension(base));
  Rng rng(55);

  SUBCASE("geodesics hit the product distance and stay unit speed") {
    for (int trial = 0; trial < 200; ++trial) {
      const ModelPoint a = random_point(cone, 2.0, rng);
      const ModelPoint b = random_point(cone, 2.0, rng);
      if (distance(cone, a, b) <= 1e-9) continue;
      const GeodesicPath g = cone_geodesic(cone, a, b);
      CHECK(g.length == doctest::Approx(distance(cone, a, b)).epsilon(1e-12));
      const double s = rng.uniform(0.0, g.length);
      CHECK(std::fabs(distance(cone, g.eval(0.0), g.eval(s)) - s) <= 1e-10);
    }
  }
  SUBCASE("rays toward suspension ideal points are unit speed") {
    for (int trial = 0; trial < 100; ++trial) {
      const ModelPoint p = random_point(cone, 2.0, rng);
      const double s_xi = rng.uniform(0.0, kPi);
      const IdealPoint xi{ModelPoint::suspension_point(
          s_xi, ModelPoint::circle_angle(rng.uniform(0.0, 2.0 * kPi + 0.2)))};
      const RayPath ray = asymptotic_ray(cone, p, xi);
      const double u = rng.uniform(0.0, 3.0);
      const double v = u + rng.uniform(0.0, 3.0);
      CHECK(std::fabs(distance(cone, ray.eval(u), ray.eval(v)) - (v - u)) <=
            1e-10);
    }
  }
  SUBCASE("small off-axis triangles are euclidean") {
    int done = 0;
    while (done < 100) {
      const ModelPoint a = random_point(cone, 2.0, rng);
      const auto pc = to_product(cone, a);
      if (pc.radius < 0.5) continue;
      // Perturb within a ball well separated from the singular axis.
      const ModelPoint b = normalize_point(
          cone, from_product(cone, {pc.h + rng.uniform(-0.05, 0.05),
                                    pc.radius + rng.uniform(-0.05, 0.05),
                                    pc.base}));
      ModelPoint cbase = pc.base;
      cbase.a += rng.uniform(-0.05, 0.05) / std::max(pc.radius, 0.5);
      const ModelPoint c = normalize_point(
          cone,
          from_product(cone, {pc.h + rng.uniform(-0.05, 0.05),
                              pc.radius + rng.uniform(-0.05, 0.05), cbase}));
      const double ab = distance(cone, a, b), ac = distance(cone, a, c);
      if (ab < 1e-4 || ac < 1e-4) continue;
      ++done;
      const double bc = distance(cone, b, c);
      const double angle =
          angle_at(cone, a, AngleTarget{b}, AngleTarget{c});
      const double law =
          std::sqrt(std::max(ab * ab + ac * ac - 2.0 * ab * ac * std::cos(angle), 0.0));
      REQUIRE(std::fabs(law - bc) <= 1e-9);
    }
  }
}

TEST_CASE("breakpoint tables") {
  const auto cone = cone_over(3.0 * kPi);
  const GeodesicPath g = cone_geodesic(cone, pt(1, 0), pt(1, 1.5 * kPi));
  const std::string csv = breakpoint_csv(g);
  CHECK(csv.rfind("parameter,point\n", 0) == 0);
  // Three rows: start, apex crossing, end.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("radius:0") != std::string::npos);
}

TEST_CASE("direction descriptors") {
  const auto cone = cone_over(3.0 * kPi);
  const ModelPoint apex = normalize_point(cone, pt(0, 0));
  const DirectionDescriptor at_apex =
      direction_at(cone, apex, AngleTarget{ideal(1.0)});
  CHECK(at_apex.space_length == doctest::Approx(3.0 * kPi));
  CHECK(at_apex.angle == doctest::Approx(1.0));

  const DirectionDescriptor off =
      direction_at(cone, pt(1, 0), AngleTarget{ideal(0.0)});
  CHECK(off.space_length == doctest::Approx(2.0 * kPi));
  CHECK(off.angle == doctest::Approx(0.0));
}
