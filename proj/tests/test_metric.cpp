#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "catasym/metric.hpp"
#include "oracles.hpp"

using namespace catasym;

namespace {

SpaceDescriptor theta_graph(double a, double b, double c) {
  return SpaceDescriptor::metric_graph(
      2, {{0, 1, a}, {0, 1, b}, {0, 1, c}});
}

ModelPoint cone_pt(double r, double angle) {
  return ModelPoint::cone_point(r, ModelPoint::circle_angle(angle));
}

}  // namespace

TEST_CASE("cone distance matches the euclidean cone law") {
  const auto cone = SpaceDescriptor::euclidean_cone(
      SpaceDescriptor::circle(2.0 * kPi));
  CHECK(distance(cone, cone_pt(1.0, 0.0), cone_pt(1.0, kPi / 2.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(distance(cone, cone_pt(2.0, 1.3), cone_pt(3.0, 1.3)) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("circle distance takes the shorter arc") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi + 0.2);
  CHECK(distance(circle, ModelPoint::circle_angle(0.0),
                 ModelPoint::circle_angle(kPi + 0.1)) ==
        doctest::Approx(kPi + 0.1).epsilon(1e-14));
}

TEST_CASE("truncated distance caps at pi") {
  const auto big = SpaceDescriptor::circle(4.0 * kPi);
  CHECK(truncated_distance(big, ModelPoint::circle_angle(0.0),
                           ModelPoint::circle_angle(1.5 * kPi)) ==
        doctest::Approx(kPi));
  const auto circle = SpaceDescriptor::circle(2.0 * kPi);
  CHECK(truncated_distance(circle, ModelPoint::circle_angle(0.0),
                           ModelPoint::circle_angle(kPi / 2.0)) ==
        doctest::Approx(kPi / 2.0));
  // Junction-to-junction on theta(pi, pi, pi): every route has length pi.
  const auto theta = theta_graph(kPi, kPi, kPi);
  CHECK(truncated_distance(theta, ModelPoint::graph_point(0, 0.0),
                           ModelPoint::graph_point(0, kPi)) ==
        doctest::Approx(kPi));
}

TEST_CASE("graph distance is exact shortest-path length") {
  const auto theta = theta_graph(kPi, kPi, kPi);
  // Midpoints of distinct arcs are pi apart via either junction.
  CHECK(distance(theta, ModelPoint::graph_point(0, kPi / 2.0),
                 ModelPoint::graph_point(1, kPi / 2.0)) ==
        doctest::Approx(kPi));
  // Same-edge points use the direct segment.
  CHECK(distance(theta, ModelPoint::graph_point(2, 0.5),
                 ModelPoint::graph_point(2, 2.5)) == doctest::Approx(2.0));
}

TEST_CASE("epsilon net sizes and meshes") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi);
  SUBCASE("quarter spacing suffices at eps = pi/2") {
    const SampleSet net = epsilon_net(circle, 0.0, kPi / 2.0, 1);
    CHECK(net.points.size() == 4);
  }
  SUBCASE("fine circle net has ~ceil(L/2eps) points and verified mesh") {
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const auto base_count =
        static_cast<std::size_t>(std::ceil(2.0 * kPi / 0.02));
    CHECK(net.points.size() >= base_count);
    CHECK(net.points.size() < base_count + 4);
    CHECK(net.points.size() % 4 == 0);
    Rng rng(99);
    std::vector<ModelPoint> probes;
    for (int i = 0; i < 2000; ++i) probes.push_back(random_point(circle, 0.0, rng));
    CHECK(oracles::covering_radius(circle, net.points, probes) <= 0.01);
  }
  SUBCASE("cone net covers the capped region") {
    const auto cone = SpaceDescriptor::euclidean_cone(circle);
    const SampleSet net = epsilon_net(cone, 2.0, 0.1, 1);
    Rng rng(7);
    std::vector<ModelPoint> probes;
    for (int i = 0; i < 10000; ++i)
      probes.push_back(random_point(cone, 2.0, rng));
    CHECK(oracles::covering_radius(cone, net.points, probes) <= 0.1);
  }
  SUBCASE("suspension net covers") {
    const auto susp = SpaceDescriptor::suspension(circle);
    const SampleSet net = epsilon_net(susp, 0.0, 0.1, 1);
    Rng rng(13);
    std::vector<ModelPoint> probes;
    for (int i = 0; i < 5000; ++i)
      probes.push_back(random_point(susp, 0.0, rng));
    CHECK(oracles::covering_radius(susp, net.points, probes) <= 0.1);
  }
  SUBCASE("euclidean net covers the capped ball") {
    const auto plane = SpaceDescriptor::euclidean(2);
    const SampleSet net = epsilon_net(plane, 1.0, 0.2, 1);
    Rng rng(23);
    std::vector<ModelPoint> probes;
    for (int i = 0; i < 3000; ++i)
      probes.push_back(random_point(plane, 1.0, rng));
    CHECK(oracles::covering_radius(plane, net.points, probes) <= 0.2);
  }
  SUBCASE("graph net covers") {
    const auto theta = theta_graph(kPi, kPi, kPi);
    const SampleSet net = epsilon_net(theta, 0.0, 0.05, 1);
    Rng rng(17);
    std::vector<ModelPoint> probes;
    for (int i = 0; i < 5000; ++i)
      probes.push_back(random_point(theta, 0.0, rng));
    CHECK(oracles::covering_radius(theta, net.points, probes) <= 0.05);
  }
  SUBCASE("bad arguments are rejected") {
    CHECK_THROWS_AS(epsilon_net(circle, 0.0, -1.0, 1), ContractViolation);
    const auto cone = SpaceDescriptor::euclidean_cone(circle);
    CHECK_THROWS_AS(epsilon_net(cone, 0.0, 0.1, 1), ContractViolation);
    CHECK_THROWS_AS(epsilon_net(circle, 0.0, 1e-9, 1, 1000), SizeLimitError);
  }
}

TEST_CASE("rescale multiplies distances exactly") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi);
  CHECK(rescale(circle, 1.0).circle_length() == doctest::Approx(2.0 * kPi));
  const auto scaled = rescale(circle, 1.1);
  CHECK(distance(scaled, ModelPoint::circle_angle(0.0),
                 ModelPoint::circle_angle(1.1 * kPi)) ==
        doctest::Approx(1.1 * kPi).epsilon(1e-14));

  const auto theta2 = rescale(theta_graph(kPi, kPi, kPi), 2.0);
  const SampleSet net = epsilon_net(theta2, 0.0, 0.05, 3);
  const DiameterBounds db = diameter_bounds(theta2, net);
  // Diameter of theta(2pi,2pi,2pi): midpoints of two arcs, 2pi apart.
  CHECK(db.lower <= 2.0 * kPi + 1e-12);
  CHECK(db.upper >= 2.0 * kPi - 1e-12);

  const auto cone = SpaceDescriptor::euclidean_cone(circle);
  CHECK_THROWS_AS(rescale(cone, 2.0), ContractViolation);
}

TEST_CASE("diameter bounds bracket the true diameter") {
  SUBCASE("circle") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const DiameterBounds db = diameter_bounds(circle, net);
    CHECK(db.lower <= kPi + 1e-12);
    CHECK(db.lower >= kPi - 0.02);
    CHECK(db.upper >= kPi);
  }
  SUBCASE("longer circle at mesh 0.01") {
    const auto circle = SpaceDescriptor::circle(2.0 * kPi + 0.2);
    const SampleSet net = epsilon_net(circle, 0.0, 0.01, 1);
    const DiameterBounds db = diameter_bounds(circle, net);
    CHECK(db.lower >= kPi + 0.08);
    CHECK(db.lower <= kPi + 0.1 + 1e-12);
    CHECK(db.upper <= kPi + 0.12 + 1e-12);
  }
  SUBCASE("round sphere") {
    const auto sphere = SpaceDescriptor::round_sphere(2);
    const SampleSet net = epsilon_net(sphere, 0.0, 0.1, 1);
    const DiameterBounds db = diameter_bounds(sphere, net);
    CHECK(db.lower <= kPi + 1e-12);
    CHECK(db.upper >= kPi - 1e-12);
  }
}

TEST_CASE("triangle inequality holds on random triples") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi + 0.2);
  const std::vector<SpaceDescriptor> spaces = {
      circle,
      theta_graph(kPi, 1.5 * kPi, 2.0),
      SpaceDescriptor::suspension(circle),
      SpaceDescriptor::euclidean_cone(circle),
      SpaceDescriptor::euclidean_cone(SpaceDescriptor::suspension(circle)),
      SpaceDescriptor::round_sphere(2),
      SpaceDescriptor::euclidean(3),
  };
  Rng rng(2024);
  for (const auto& space : spaces) {
    for (int trial = 0; trial < 100000 / 7; ++trial) {
      const ModelPoint a = random_point(space, 2.0, rng);
      const ModelPoint b = random_point(space, 2.0, rng);
      const ModelPoint c = random_point(space, 2.0, rng);
      const double ab = distance(space, a, b);
      const double bc = distance(space, b, c);
      const double ac = distance(space, a, c);
      const double scale = std::max({ab, bc, ac, 1.0});
      REQUIRE(ac <= ab + bc + 1e-12 * scale);
    }
  }
}

TEST_CASE("cone distance degenerates to the apex path at base distance pi") {
  const auto cone = SpaceDescriptor::euclidean_cone(
      SpaceDescriptor::circle(3.0 * kPi));
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double t1 = rng.uniform(0.0, 3.0);
    const double t2 = rng.uniform(0.0, 3.0);
    const double a = rng.uniform(0.0, 3.0 * kPi);
    // Base points exactly pi apart.
    const ModelPoint p = cone_pt(t1, a);
    const ModelPoint q =
        normalize_point(cone, cone_pt(t2, a + kPi));
    CHECK(distance(cone, p, q) == doctest::Approx(t1 + t2).epsilon(1e-12));
  }
}

TEST_CASE("suspension of the unit circle is the round 2-sphere") {
  const auto susp =
      SpaceDescriptor::suspension(SpaceDescriptor::circle(2.0 * kPi));
  const auto sphere = SpaceDescriptor::round_sphere(2);
  Rng rng(31);
  for (int i = 0; i < 5000; ++i) {
    const ModelPoint a = random_point(susp, 0.0, rng);
    const ModelPoint b = random_point(susp, 0.0, rng);
    const auto embed = [](const ModelPoint& p) {
      const double s = p.a;
      const double phi = p.base_ref().a;
      return ModelPoint::vector_point(
          {std::sin(s) * std::cos(phi), std::sin(s) * std::sin(phi),
           std::cos(s)});
    };
    CHECK(std::fabs(distance(susp, a, b) -
                    distance(sphere, embed(a), embed(b))) <= 1e-12);
  }
}

TEST_CASE("cone over a suspension carries the product metric") {
  const auto base = SpaceDescriptor::circle(2.0 * kPi + 0.2);
  const auto cone_susp =
      SpaceDescriptor::euclidean_cone(SpaceDescriptor::suspension(base));
  const auto factor = SpaceDescriptor::euclidean_cone(base);
  Rng rng(47);
  for (int i = 0; i < 5000; ++i) {
    const ModelPoint a = random_point(cone_susp, 2.0, rng);
    const ModelPoint b = random_point(cone_susp, 2.0, rng);
    const auto split = [&](const ModelPoint& p) {
      const double t = p.a;
      const double s = p.base_ref().a;
      const double h = t * std::cos(s);
      const ModelPoint w = ModelPoint::cone_point(
          t * std::sin(s), p.base_ref().base_ref());
      return std::pair<double, ModelPoint>{h, w};
    };
    const auto [ha, wa] = split(a);
    const auto [hb, wb] = split(b);
    const double dw = distance(factor, wa, wb);
    const double product = std::hypot(ha - hb, dw);
    CHECK(std::fabs(distance(cone_susp, a, b) - product) <= 1e-12);
  }
}

TEST_CASE("variant mismatches are contract violations") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi);
  CHECK_THROWS_AS(
      distance(circle, ModelPoint::circle_angle(0.0),
               ModelPoint::graph_point(0, 0.0)),
      ContractViolation);
  CHECK_THROWS_AS(normalize_point(circle, ModelPoint::graph_point(0, 0.0)),
                  ContractViolation);
}

TEST_CASE("space descriptors round-trip through text") {
  const std::vector<SpaceDescriptor> spaces = {
      SpaceDescriptor::circle(2.0 * kPi + 0.2),
      theta_graph(kPi, kPi, kPi),
      SpaceDescriptor::suspension(SpaceDescriptor::circle(7.0)),
      SpaceDescriptor::euclidean_cone(
          SpaceDescriptor::suspension(SpaceDescriptor::circle(7.0))),
      SpaceDescriptor::round_sphere(2),
      SpaceDescriptor::euclidean(3),
  };
  for (const auto& s : spaces)
    CHECK(SpaceDescriptor::parse(s.to_string()) == s);
}

TEST_CASE("apex and pole degeneracies normalize to sentinels") {
  const auto circle = SpaceDescriptor::circle(2.0 * kPi);
  const auto cone = SpaceDescriptor::euclidean_cone(circle);
  const ModelPoint apex1 =
      normalize_point(cone, cone_pt(0.0, 1.0));
  const ModelPoint apex2 =
      normalize_point(cone, cone_pt(0.0, 2.5));
  CHECK(apex1.base_ref().a == apex2.base_ref().a);
  CHECK(distance(cone, apex1, apex2) == 0.0);

  const auto susp = SpaceDescriptor::suspension(circle);
  const ModelPoint pole1 = normalize_point(
      susp, ModelPoint::suspension_point(0.0, ModelPoint::circle_angle(1.0)));
  const ModelPoint pole2 = normalize_point(
      susp, ModelPoint::suspension_point(0.0, ModelPoint::circle_angle(2.0)));
  CHECK(distance(susp, pole1, pole2) == 0.0);
}
