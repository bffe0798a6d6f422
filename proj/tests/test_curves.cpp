#include <cmath>

#include "birkhoff/curve.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/mesh.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {

const double kPi = 3.14159265358979323846;

// Marching-triangles slice of the plane z = zv; assumes zv misses every vertex
// and the slice is a single cycle (true for latitude circles on a sphere).
ClosedCurve slicePlaneZ(const TriMesh& mesh, double zv) {
  auto crossT = [&](const TriMesh::Edge& ed) -> double {
    double a = mesh.vertex(ed.v0).z - zv, b = mesh.vertex(ed.v1).z - zv;
    if ((a > 0) == (b > 0)) return -1;
    return a / (a - b);
  };
  int e0 = -1;
  for (int e = 0; e < mesh.edgeCount(); ++e)
    if (crossT(mesh.edge(e)) >= 0) {
      e0 = e;
      break;
    }
  REQUIRE(e0 >= 0);
  ClosedCurve c;
  int e = e0, from = mesh.edge(e0).f1;
  do {
    c.pts.push_back(make_edge_point(mesh, e, crossT(mesh.edge(e))));
    int f = mesh.edge(e).f0 == from ? mesh.edge(e).f1 : mesh.edge(e).f0;
    int next = -1;
    for (int s = 0; s < 3; ++s) {
      int ee = mesh.faceEdge(f, s);
      if (ee != e && crossT(mesh.edge(ee)) >= 0) {
        next = ee;
        break;
      }
    }
    REQUIRE(next >= 0);
    from = f;
    e = next;
  } while (e != e0);
  return c;
}

const TriMesh& sphere() {
  static TriMesh m = generate_icosphere(5);
  return m;
}

}  // namespace

TEST_CASE("curve_length: equator polyline on icosphere") {
  ClosedCurve eq = slicePlaneZ(sphere(), 1e-3);
  check_valid(sphere(), eq);
  CHECK(eq.size() >= 3);
  double len = curve_length(sphere(), eq);
  CHECK(len == doctest::Approx(2 * kPi).epsilon(0.01));
}

TEST_CASE("curve_length: two-point path inside one face") {
  const TriMesh& m = sphere();
  SurfacePoint a = make_face_point(m, 0, 1, 1, 1);
  SurfacePoint b = make_face_point(m, 0, 0.6, 0.2, 0.2);
  Path p;
  p.pts = {a, b};
  check_valid(m, p);
  CHECK(curve_length(m, p) == doctest::Approx(dist(position(m, a), position(m, b))).epsilon(1e-12));
}

TEST_CASE("curve_length: traversing a curve twice doubles the length") {
  ClosedCurve eq = slicePlaneZ(sphere(), 1e-3);
  double len = curve_length(sphere(), eq);
  ClosedCurve twice = eq;
  twice.pts.insert(twice.pts.end(), eq.pts.begin(), eq.pts.end());
  CHECK(curve_length(sphere(), twice) == doctest::Approx(2 * len).epsilon(1e-12));
}

TEST_CASE("resample: break points, length preservation, idempotence") {
  const TriMesh& m = sphere();
  ClosedCurve eq = slicePlaneZ(m, 1e-3);
  double len = curve_length(m, eq);

  SUBCASE("four breaks keep length above the inscribed square") {
    ClosedCurve r = resample(m, eq, 4);
    CHECK(r.breaks.size() == 4);
    check_valid(m, r);
    double rl = curve_length(m, r);
    CHECK(rl >= 4 * std::sqrt(2.0) * 0.99);
    CHECK(rl == doctest::Approx(len).epsilon(1e-9));
    // breaks are equally spaced along arclength
    Path quarter = sub_polyline(r, 0, 1);
    CHECK(curve_length(m, quarter) == doctest::Approx(len / 4).epsilon(1e-9));
  }
  SUBCASE("n = point count leaves the curve in place") {
    ClosedCurve r = resample(m, eq, (int)eq.size());
    CHECK(hausdorff_distance(m, eq, r) <= 1e-9);
  }
  SUBCASE("n = 1000 keeps length within 0.1%") {
    ClosedCurve r = resample(m, eq, 1000);
    CHECK(curve_length(m, r) == doctest::Approx(len).epsilon(1e-3));
  }
}

TEST_CASE("concatenate: split and rejoin, orientation flags, gaps") {
  const TriMesh& m = sphere();
  ClosedCurve eq = resample(m, slicePlaneZ(m, 1e-3), 6);
  double len = curve_length(m, eq);
  Path half1 = sub_polyline(eq, 0, 3);
  Path half2 = sub_polyline(eq, 3, 0);

  SUBCASE("two arcs rejoin to the original curve") {
    ClosedCurve joined = concatenate(m, {{half1.pts, false}, {half2.pts, false}}, 1e-9);
    CHECK(hausdorff_distance(m, eq, joined) <= 1e-9);
    CHECK(curve_length(m, joined) == doctest::Approx(len).epsilon(1e-12));
  }
  SUBCASE("reversed flag restores a backwards fragment") {
    std::vector<SurfacePoint> back(half2.pts.rbegin(), half2.pts.rend());
    ClosedCurve joined = concatenate(m, {{half1.pts, false}, {back, true}}, 1e-9);
    CHECK(hausdorff_distance(m, eq, joined) <= 1e-9);
  }
  SUBCASE("length is additive over fragments") {
    ClosedCurve joined = concatenate(m, {{half1.pts, false}, {half2.pts, false}}, 1e-9);
    CHECK(curve_length(m, half1) + curve_length(m, half2) ==
          doctest::Approx(curve_length(m, joined)).epsilon(1e-12));
  }
  SUBCASE("a real gap throws GapTooLarge") {
    Path bad = sub_polyline(eq, 4, 0);  // starts one break late
    CHECK_THROWS_AS(concatenate(m, {{half1.pts, false}, {bad.pts, false}}, 1e-9), GapTooLarge);
  }
}

TEST_CASE("hausdorff_distance: identity, covers, latitude bands") {
  const TriMesh& m = sphere();
  ClosedCurve eq = slicePlaneZ(m, 1e-3);

  SUBCASE("curve vs itself is zero") { CHECK(hausdorff_distance(m, eq, eq) <= 1e-12); }
  SUBCASE("curve vs its double cover is zero") {
    ClosedCurve twice = eq;
    twice.pts.insert(twice.pts.end(), eq.pts.begin(), eq.pts.end());
    CHECK(hausdorff_distance(m, eq, twice) <= 1e-12);
  }
  SUBCASE("equator vs latitude circle 0.3 away") {
    ClosedCurve lat = slicePlaneZ(m, std::sin(0.3));
    double expect = 2 * std::sin((0.3 - 1e-3) / 2);  // chord between the circles
    CHECK(hausdorff_distance(m, eq, lat) == doctest::Approx(expect).epsilon(0.05));
    CHECK(hausdorff_distance(m, eq, lat) == doctest::Approx(0.3).epsilon(0.05));
  }
  SUBCASE("pseudometric: symmetry and triangle inequality") {
    ClosedCurve b = slicePlaneZ(m, std::sin(0.15));
    ClosedCurve c = slicePlaneZ(m, std::sin(0.3));
    double ab = hausdorff_distance(m, eq, b);
    double bc = hausdorff_distance(m, b, c);
    double ac = hausdorff_distance(m, eq, c);
    CHECK(hausdorff_distance(m, b, eq) == doctest::Approx(ab).epsilon(1e-12));
    CHECK(ac <= ab + bc + 1e-6);
  }
}

TEST_CASE("distinct_geodesics and the covering-length rule") {
  const TriMesh& m = sphere();
  ClosedCurve eq = slicePlaneZ(m, 1e-3);

  CHECK(length_multiple_of(2 * kPi, 4 * kPi));
  CHECK(length_multiple_of(2 * kPi, 6 * kPi));
  CHECK_FALSE(length_multiple_of(2 * kPi, 3 * kPi));

  ClosedCurve twice = eq;
  twice.pts.insert(twice.pts.end(), eq.pts.begin(), eq.pts.end());
  CHECK_FALSE(distinct_geodesics(m, eq, twice));

  ClosedCurve lat = slicePlaneZ(m, std::sin(0.5));
  CHECK(distinct_geodesics(m, eq, lat));
}
