#include <cmath>

#include "birkhoff/crossings.hpp"
#include "birkhoff/curve.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/mesh.hpp"
#include "birkhoff/metric.hpp"
#include "birkhoff/straighten.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {

const double kPi = 3.14159265358979323846;

const TriMesh& sphere() {
  static TriMesh m = generate_icosphere(5);
  return m;
}

std::shared_ptr<const SteinerGraph> sphereGraph() {
  static std::shared_ptr<const SteinerGraph> g = build_steiner_graph(sphere(), 3);
  return g;
}

SurfacePoint nearestVertexPoint(const TriMesh& m, const Vec3& q) {
  int best = 0;
  double bd = 1e300;
  for (int v = 0; v < m.vertexCount(); ++v) {
    double d = dist(m.vertex(v), q);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return make_vertex_point(m, best);
}

ClosedCurve equator() {
  SurfacePoint north = nearestVertexPoint(sphere(), {0, 0, 1});
  DistanceField f = distance_field(sphereGraph(), north);
  std::vector<LevelCycle> ls = level_set(f, kPi / 2);
  REQUIRE(ls.size() == 1);
  return ls[0].curve;
}

// figure-eight around (1,0,0): two geodesic diagonals crossing at the center,
// closed off by connectors that stay clear of it
ClosedCurve figureEight() {
  auto on = [&](double e, double n) {
    Vec3 q = normalize(Vec3{1, 0, 0} + Vec3{0, 1, 0} * e + Vec3{0, 0, 1} * n);
    return nearestVertexPoint(sphere(), q);
  };
  SurfacePoint a = on(-0.3, 0.3), b = on(0.3, -0.3);   // NW, SE
  SurfacePoint c = on(-0.3, -0.3), d = on(0.3, 0.3);   // SW, NE
  std::vector<CurveFragment> frags;
  frags.push_back({geodesic_join(sphere(), a, b).pts, false});
  frags.push_back({geodesic_join(sphere(), b, c).pts, false});
  frags.push_back({geodesic_join(sphere(), c, d).pts, false});
  frags.push_back({geodesic_join(sphere(), d, a).pts, false});
  return concatenate(sphere(), frags, 1e-9);
}

}  // namespace

TEST_CASE("self_intersections: simple, figure-eight, doubled") {
  SUBCASE("equator is simple") {
    CHECK(self_intersections(sphere(), equator()).empty());
  }
  SUBCASE("figure-eight has exactly one crossing, at its waist") {
    ClosedCurve eight = figureEight();
    std::vector<Crossing> xs = self_intersections(sphere(), eight);
    REQUIRE(xs.size() == 1);
    CHECK(dist(position(sphere(), xs[0].at), {1, 0, 0}) < 0.1);
    CHECK(xs[0].sign != 0);
  }
  SUBCASE("a doubly traversed curve is non-generic") {
    ClosedCurve eq = equator();
    ClosedCurve twice = eq;
    twice.pts.insert(twice.pts.end(), eq.pts.begin(), eq.pts.end());
    twice.breaks.clear();
    CHECK_THROWS_AS(self_intersections(sphere(), twice), NonGenericCrossing);
  }
}

TEST_CASE("oriented_intersection_number: meridian and disjoint paths") {
  ClosedCurve eq = equator();
  SurfacePoint north = nearestVertexPoint(sphere(), {0, 0, 1});
  SurfacePoint south = nearestVertexPoint(sphere(), {0, 0, -1});
  Path meridian = shortest_path(*sphereGraph(), north, south);

  int oin = oriented_intersection_number(sphere(), eq, meridian);
  CHECK(std::abs(oin) == 1);

  SUBCASE("reversing the path flips the sign") {
    Path back = meridian;
    std::reverse(back.pts.begin(), back.pts.end());
    CHECK(oriented_intersection_number(sphere(), eq, back) == -oin);
  }
  SUBCASE("reversing the curve flips the sign") {
    ClosedCurve rev = eq;
    std::reverse(rev.pts.begin(), rev.pts.end());
    rev.breaks.clear();
    CHECK(oriented_intersection_number(sphere(), rev, meridian) == -oin);
  }
  SUBCASE("a disjoint path contributes nothing") {
    SurfacePoint p = nearestVertexPoint(sphere(), {0.3, 0, 0.95});
    Path arc = shortest_path(*sphereGraph(), north, p);
    CHECK(oriented_intersection_number(sphere(), eq, arc) == 0);
  }
}

TEST_CASE("winding_mod2: circle of latitude separates the poles") {
  SurfacePoint north = nearestVertexPoint(sphere(), {0, 0, 1});
  SurfacePoint south = nearestVertexPoint(sphere(), {0, 0, -1});
  DistanceField f = distance_field(sphereGraph(), north);
  std::vector<LevelCycle> ls = level_set(f, 0.5);
  REQUIRE(ls.size() == 1);
  const ClosedCurve& circle = ls[0].curve;

  CHECK(winding_mod2(*sphereGraph(), circle, north, south) == 1);

  SurfacePoint outside = nearestVertexPoint(sphere(), {1, 0, 0});
  CHECK(winding_mod2(*sphereGraph(), circle, outside, south) == 0);

  SUBCASE("invariant under the choice of far point in the outer region") {
    for (Vec3 q : {Vec3{0.5, 0, -0.85}, Vec3{0, -0.6, -0.8}, Vec3{-0.9, 0.3, -0.3}}) {
      SurfacePoint far = nearestVertexPoint(sphere(), q);
      CHECK(winding_mod2(*sphereGraph(), circle, north, far) == 1);
    }
  }
}

TEST_CASE("level cycles cross a source-to-farthest path an odd number of times") {
  SurfacePoint north = nearestVertexPoint(sphere(), {0, 0, 1});
  DistanceField f = distance_field(sphereGraph(), north);
  auto [far, dmax] = farthest_point(f);
  Path witness = shortest_path(*sphereGraph(), north, far);

  for (double r : {0.7, 1.3, 2.0}) {
    for (const LevelCycle& lc : level_set(f, r)) {
      int oin = oriented_intersection_number(sphere(), lc.curve, witness);
      CHECK(((oin % 2) + 2) % 2 == 1);
    }
  }
}
