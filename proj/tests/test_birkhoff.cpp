#include <cmath>

#include "birkhoff/birkhoff.hpp"
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

const TriMesh& sphere5() {
  static TriMesh m = generate_icosphere(5);
  return m;
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

std::shared_ptr<const SteinerGraph> sphereGraph() {
  static std::shared_ptr<const SteinerGraph> g = build_steiner_graph(sphere5(), 3);
  return g;
}

// geodesic circle of radius r around the vertex nearest to axis
ClosedCurve circleAround(const Vec3& axis, double r) {
  SurfacePoint c = nearestVertexPoint(sphere5(), axis);
  DistanceField f = distance_field(sphereGraph(), c);
  std::vector<LevelCycle> ls = level_set(f, r);
  REQUIRE(ls.size() == 1);
  return ls[0].curve;
}

// equator perturbed by alternating latitude offsets, joined geodesically
ClosedCurve zigzagEquator(int n, double amp) {
  std::vector<SurfacePoint> anchors;
  for (int k = 0; k < n; ++k) {
    double th = 2 * kPi * k / n;
    double z = k % 2 ? -amp : amp;
    anchors.push_back(
        nearestVertexPoint(sphere5(), normalize(Vec3{std::cos(th), std::sin(th), z})));
  }
  std::vector<CurveFragment> frags;
  for (int k = 0; k < n; ++k)
    frags.push_back({geodesic_join(sphere5(), anchors[k], anchors[(k + 1) % n]).pts, false});
  return concatenate(sphere5(), frags, 1e-9);
}
}  // namespace

TEST_CASE("geodesic_join: within one face is the straight segment") {
  const TriMesh& m = sphere5();
  SurfacePoint p = make_face_point(m, 10, 0.7, 0.2, 0.1);
  SurfacePoint q = make_face_point(m, 10, 0.1, 0.3, 0.6);
  Path j = geodesic_join(m, p, q);
  CHECK(j.size() == 2);
  CHECK(curve_length(m, j) ==
        doctest::Approx(dist(position(m, p), position(m, q))).epsilon(1e-12));
}

TEST_CASE("geodesic_join: across one edge beats the route via a shared vertex") {
  const TriMesh& m = sphere5();
  const TriMesh::Edge& ed = m.edge(0);
  SurfacePoint p = make_face_point(m, ed.f0, 1, 1, 1);
  SurfacePoint q = make_face_point(m, ed.f1, 1, 1, 1);
  Path j = geodesic_join(m, p, q);
  check_valid(m, j);
  double len = curve_length(m, j);
  Vec3 pp = position(m, p), qq = position(m, q);
  CHECK(len >= dist(pp, qq) - 1e-12);
  CHECK(len < dist(pp, m.vertex(ed.v0)) + dist(m.vertex(ed.v0), qq));
  CHECK(len < dist(pp, m.vertex(ed.v1)) + dist(m.vertex(ed.v1), qq));
}

TEST_CASE("geodesic_join: quarter great-circle arc on the sphere") {
  const TriMesh& m = sphere5();
  SurfacePoint p = nearestVertexPoint(m, {1, 0, 0});
  SurfacePoint q = nearestVertexPoint(m, {0, 1, 0});
  Path j = geodesic_join(m, p, q);
  check_valid(m, j);
  CHECK(curve_length(m, j) == doctest::Approx(kPi / 2).epsilon(0.02));
}

TEST_CASE("geodesic_join: narrow corridor misses, widened corridor succeeds") {
  const TriMesh& m = sphere5();
  SurfacePoint p = nearestVertexPoint(m, {1, 0, 0});
  SurfacePoint q = nearestVertexPoint(m, {0, 1, 0});
  std::vector<int> tiny = faces_of(m, p);
  CHECK_THROWS_AS(geodesic_join(m, p, q, tiny), CorridorMiss);
  std::vector<int> all(m.faceCount());
  for (int f = 0; f < m.faceCount(); ++f) all[f] = f;
  Path j = geodesic_join(m, p, q, all);
  CHECK(curve_length(m, j) == doctest::Approx(kPi / 2).epsilon(0.02));
}

TEST_CASE("interior_angle: straightened arcs are angle-flat") {
  const TriMesh& m = sphere5();
  SurfacePoint p = nearestVertexPoint(m, {1, 0, 0});
  SurfacePoint q = nearestVertexPoint(m, {0, 1, 0});
  Path j = geodesic_join(m, p, q);
  double worst = 0;
  for (size_t i = 1; i + 1 < j.pts.size(); ++i)
    worst = std::max(worst, std::abs(kPi - interior_angle(m, j.pts[i - 1], j.pts[i], j.pts[i + 1])));
  CHECK(worst < 0.02);
}

TEST_CASE("birkhoff_step: fixed point, shrinking circle, zig-zag") {
  const TriMesh& m = sphere5();

  SUBCASE("a geodesic is a fixed point up to resampling noise") {
    // the waist ring of the capsule's flat cylinder wall unrolls straight
    TriMesh cap = generate_capsule(1, 10, 48);
    auto crossT = [&](const TriMesh::Edge& ed) -> double {
      double a = cap.vertex(ed.v0).z - 1e-3, b = cap.vertex(ed.v1).z - 1e-3;
      if ((a > 0) == (b > 0)) return -1;
      return a / (a - b);
    };
    int e0 = -1;
    for (int e = 0; e < cap.edgeCount(); ++e)
      if (crossT(cap.edge(e)) >= 0) {
        e0 = e;
        break;
      }
    REQUIRE(e0 >= 0);
    ClosedCurve ring;
    int e = e0, from = cap.edge(e0).f1;
    do {
      ring.pts.push_back(make_edge_point(cap, e, crossT(cap.edge(e))));
      int f = cap.edge(e).f0 == from ? cap.edge(e).f1 : cap.edge(e).f0;
      int next = -1;
      for (int s = 0; s < 3; ++s) {
        int ee = cap.faceEdge(f, s);
        if (ee != e && crossT(cap.edge(ee)) >= 0) {
          next = ee;
          break;
        }
      }
      REQUIRE(next >= 0);
      from = f;
      e = next;
    } while (e != e0);

    double len = curve_length(cap, ring);
    CHECK(geodesic_residual(cap, ring) < 1e-6);
    ClosedCurve after = birkhoff_step(cap, ring, 64);
    check_valid(cap, after);
    CHECK(curve_length(cap, after) <= len * (1 + 1e-9));
    CHECK(curve_length(cap, after) >= len * (1 - 1e-6));
  }
  SUBCASE("a circle of latitude strictly shortens") {
    ClosedCurve lat = circleAround({0, 0, 1}, 0.4);
    double len = curve_length(m, lat);
    ClosedCurve after = birkhoff_step(m, lat, 32);
    CHECK(curve_length(m, after) < len);
  }
  SUBCASE("a zig-zag equator shortens monotonically toward 2*pi") {
    ClosedCurve zz = zigzagEquator(16, 0.05);
    double len = curve_length(m, zz);
    CHECK(len > 2 * kPi * 1.005);
    for (int s = 0; s < 5; ++s) {
      ClosedCurve next = birkhoff_step(m, zz, 64);
      double nlen = curve_length(m, next);
      CHECK(nlen <= len * (1 + 1e-9));
      zz = next;
      len = nlen;
    }
    CHECK(len >= 2 * kPi * 0.99);
    CHECK(len < curve_length(m, zigzagEquator(16, 0.05)));
  }
  SUBCASE("odd or tiny break counts are rejected") {
    ClosedCurve eq = circleAround({0, 0, 1}, kPi / 2);
    CHECK_THROWS_AS(birkhoff_step(m, eq, 33), PreconditionError);
    CHECK_THROWS_AS(birkhoff_step(m, eq, 2), PreconditionError);
  }
}

TEST_CASE("birkhoff_run: geodesic, collapse, capsule waist") {
  const TriMesh& m = sphere5();

  SUBCASE("equator converges to a closed geodesic of length 2*pi") {
    BirkhoffParams prm;
    prm.n = 128;
    ShorteningOutcome out = birkhoff_run(m, circleAround({0, 0, 1}, kPi / 2), prm);
    REQUIRE(out.kind == ShorteningOutcome::Geodesic);
    CHECK(out.residual <= prm.geodesicTol);
    CHECK(curve_length(m, out.finalCurve) == doctest::Approx(2 * kPi).epsilon(0.01));
    // fixed-point property: one more step barely changes the length
    double len = curve_length(m, out.finalCurve);
    ClosedCurve again = birkhoff_step(m, out.finalCurve, 128);
    CHECK(std::abs(curve_length(m, again) - len) < 1e-4 * len);
  }
  SUBCASE("a small circle near the pole collapses to a point near the pole") {
    BirkhoffParams prm;
    prm.n = 32;
    ShorteningOutcome out = birkhoff_run(m, circleAround({0, 0, 1}, 0.35), prm);
    REQUIRE(out.kind == ShorteningOutcome::PointCollapse);
    REQUIRE(out.collapsePoint.has_value());
    CHECK(dist(position(m, *out.collapsePoint), {0, 0, 1}) < 0.35);
  }
  SUBCASE("the capsule waist is a stable geodesic") {
    TriMesh cap = generate_capsule(0.2, 10, 32);
    auto g = build_steiner_graph(cap, 2);
    SurfacePoint tip = nearestVertexPoint(cap, {0, 0, 5.2});
    DistanceField f = distance_field(g, tip);
    std::vector<LevelCycle> ls = level_set(f, 5 + 0.1 * kPi);  // the waist plane
    REQUIRE(ls.size() == 1);
    BirkhoffParams prm;
    prm.n = 64;
    ShorteningOutcome out = birkhoff_run(cap, ls[0].curve, prm);
    REQUIRE(out.kind == ShorteningOutcome::Geodesic);
    CHECK(curve_length(cap, out.finalCurve) == doctest::Approx(0.4 * kPi).epsilon(0.02));
  }
}

TEST_CASE("birkhoff_run: trace invariants") {
  const TriMesh& m = sphere5();
  BirkhoffParams prm;
  prm.n = 64;
  prm.recordTrace = true;
  ShorteningOutcome out = birkhoff_run(m, circleAround({0, 0, 1}, 0.6), prm);
  REQUIRE(out.trace.has_value());
  const HomotopyTrace& tr = *out.trace;
  REQUIRE(tr.curves.size() >= 3);
  REQUIRE(tr.curves.size() == tr.lengths.size());

  SUBCASE("lengths are non-increasing") {
    for (size_t i = 1; i < tr.lengths.size(); ++i)
      CHECK(tr.lengths[i] <= tr.lengths[i - 1] * (1 + 1e-9));
  }
  SUBCASE("consecutive curves stay Hausdorff-close") {
    for (size_t i = 1; i < tr.curves.size(); ++i) {
      double bound = 2 * tr.lengths[i - 1] / prm.n;
      CHECK(hausdorff_distance(m, tr.curves[i - 1], tr.curves[i]) <= bound);
    }
  }
  SUBCASE("winding around the collapse center is constant along the trace") {
    REQUIRE(out.kind == ShorteningOutcome::PointCollapse);
    SurfacePoint center = *out.collapsePoint;
    SurfacePoint far = nearestVertexPoint(m, {0, 0, -1});
    for (size_t i = 0; i < tr.curves.size(); i += tr.curves.size() / 5 + 1) {
      if (tr.lengths[i] < 6 * m.minEdge()) break;
      CHECK(winding_mod2(*sphereGraph(), tr.curves[i], center, far) == 1);
    }
  }
}

TEST_CASE("track_last_intersection: separation from a level cycle") {
  const TriMesh& m = sphere5();
  ClosedCurve equator = circleAround({0, 0, 1}, kPi / 2);
  LevelCycle eqCycle{equator, kPi / 2};

  // a tilted circle that starts out crossing the equator and collapses north
  SurfacePoint c = nearestVertexPoint(m, normalize(Vec3{0.6, 0, 0.8}));
  DistanceField f = distance_field(sphereGraph(), c);
  std::vector<LevelCycle> ls = level_set(f, 1.0);
  REQUIRE(ls.size() == 1);

  BirkhoffParams prm;
  prm.n = 48;
  prm.recordTrace = true;
  ShorteningOutcome out = birkhoff_run(m, ls[0].curve, prm);
  REQUIRE(out.kind == ShorteningOutcome::PointCollapse);

  ClosedCurve last = track_last_intersection(m, *out.trace, eqCycle);
  CHECK_FALSE(curve_intersections(m, last, equator).empty());

  SUBCASE("a trace that never meets the cycle") {
    BirkhoffParams p2;
    p2.n = 32;
    p2.recordTrace = true;
    ShorteningOutcome o2 = birkhoff_run(m, circleAround({0, 0, 1}, 0.4), p2);
    CHECK_THROWS_AS(track_last_intersection(m, *o2.trace, eqCycle), NeverIntersects);
  }
  SUBCASE("a trace cut off while still crossing") {
    HomotopyTrace cut;
    cut.curves = {out.trace->curves[0], out.trace->curves[1]};
    cut.lengths = {out.trace->lengths[0], out.trace->lengths[1]};
    CHECK_THROWS_AS(track_last_intersection(m, cut, eqCycle), NeverSeparates);
  }
}
