#include <cmath>

#include "birkhoff/birkhoff.hpp"
#include "birkhoff/constructions.hpp"
#include "birkhoff/crossings.hpp"
#include "birkhoff/curve.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/mesh.hpp"
#include "birkhoff/metric.hpp"
#include "doctest.h"
#include "test_support.h"

using namespace birkhoff;

using namespace birkhoff::testsupport;

TEST_CASE("bracket_n and covering_N") {
  SUBCASE("round sphere: L1 = 2 pi, A = 4 pi sits in the n = 3 bracket") {
    // 4 sqrt(2A) = 4 sqrt(8 pi) ~ 20.05; 20.05/4 < 2 pi <= 20.05/3
    CHECK(bracket_n(4 * kPi, 2 * kPi) == 3);
  }
  SUBCASE("L1 at the Rotman bound gives n = 1") {
    double A = 7.3;
    CHECK(bracket_n(A, 4 * std::sqrt(2 * A)) == 1);
    CHECK_THROWS_AS(bracket_n(A, 4 * std::sqrt(2 * A) * 1.01), RotmanViolated);
  }
  SUBCASE("bracket property holds across scales") {
    for (double A : {0.7, 4 * kPi, 300.0}) {
      double R = 4 * std::sqrt(2 * A);
      for (int k = 1; k <= 40; ++k) {
        double L1 = R / (k + 0.5);
        int n = bracket_n(A, L1);
        CHECK(R / (n + 1) < L1);
        CHECK(L1 <= R / n);
      }
    }
  }
  SUBCASE("covering_N values and lower bound") {
    CHECK(covering_N(1) == 2);
    CHECK(covering_N(3) == 4);
    CHECK(covering_N(7) == 10);
    for (long long n = 1; n <= 50; ++n)
      CHECK((double)covering_N(n) > (n + 1) * (n + 1) / 8.0 + 1.0);
    CHECK_THROWS_AS(covering_N(0), PreconditionError);
  }
}

TEST_CASE("complement regions of a closed curve") {
  const TriMesh& m = sphere4();
  ClosedCurve eq = equator(m);
  std::vector<std::vector<char>> regions = complement_regions(m, eq);
  REQUIRE(regions.size() == 2);

  // both hemispheres hold just under half of the faces
  int total = m.faceCount();
  for (const auto& mask : regions) {
    int cnt = 0;
    for (char c : mask) cnt += c;
    CHECK(cnt > total / 3);
    CHECK(cnt < total / 2 + total / 20);
  }

  SurfacePoint north = nearestVertexPoint(m, {0, 0, 1});
  SurfacePoint south = nearestVertexPoint(m, {0, 0, -1});
  int rn = region_of(regions, m, north);
  int rs = region_of(regions, m, south);
  CHECK(rn >= 0);
  CHECK(rs >= 0);
  CHECK(rn != rs);
  // a point of the curve itself belongs to no region
  CHECK(region_of(regions, m, eq.pts.front()) == -1);
}

TEST_CASE("perturb_offside pushes a curve into one region") {
  const TriMesh& m = sphere4();
  ClosedCurve eq = equator(m);
  std::vector<std::vector<char>> regions = complement_regions(m, eq);
  int rn = region_of(regions, m, nearestVertexPoint(m, {0, 0, 1}));

  double eps = 4 * m.minEdge();
  ClosedCurve off = perturb_offside(m, eq, regions[rn], eps);
  for (const SurfacePoint& p : off.pts) CHECK(position(m, p).z > 0);
  CHECK(hausdorff_distance(m, eq, off) < 2 * eps);

  CHECK_THROWS_AS(perturb_offside(m, eq, regions[rn], 0.1 * m.minEdge()), PreconditionError);
}

TEST_CASE("distance sweepout of the round sphere") {
  const TriMesh& m = sphere4();
  SurfacePoint north = nearestVertexPoint(m, {0, 0, 1});
  Sweepout s = sweepout_from_distance(m, north, 96);

  REQUIRE(s.slices.size() == 96);
  CHECK(curve_length(m, s.slices.front()) < 3 * m.minEdge());
  CHECK(curve_length(m, s.slices.back()) < 3 * m.minEdge());
  // the longest slice is the equator
  CHECK(s.maxLength == doctest::Approx(2 * kPi).epsilon(0.03));
  CHECK_THROWS_AS(sweepout_from_distance(m, north, 32), PreconditionError);

  SUBCASE("pull-tight min-max recovers the width 2 pi") {
    MinmaxResult r = minmax_over_sweepout(m, s, 20);
    CHECK(r.width == doctest::Approx(2 * kPi).epsilon(0.03));
    CHECK(curve_length(m, r.critical) == doctest::Approx(2 * kPi).epsilon(0.03));
    CHECK(geodesic_residual(m, r.critical) < 0.03);
  }

  SUBCASE("the sweepout is noncontractible, an out-and-back family is not") {
    CHECK(noncontractibility_check(m, s));

    DistanceField f = distance_field(m, north, 3);
    Sweepout back;
    ClosedCurve pc;
    pc.pts = {north, north, north};
    back.slices.push_back(pc);
    for (int i = 1; i <= 10; ++i) back.slices.push_back(level_set(f, 0.05 * i).front().curve);
    for (int i = 10; i >= 1; --i) back.slices.push_back(level_set(f, 0.05 * i).front().curve);
    back.slices.push_back(pc);
    CHECK_FALSE(noncontractibility_check(m, back));
  }
}

TEST_CASE("starfish constructions") {
  const StarfishFixture& f = starfish();
  const TriMesh& m = f.mesh;
  double A = m.area();
  double L1 = curve_length(m, f.gamma1);

  // the seed shortened to a genuine figure-eight geodesic
  REQUIRE(self_intersections(m, f.gamma1).size() == 1);
  CHECK(geodesic_residual(m, f.gamma1) <= 0.03);
  CHECK(L1 > 4.0);

  // its complement has three regions, one per leg tip
  std::vector<std::vector<char>> regions = complement_regions(m, f.gamma1);
  REQUIRE(regions.size() == 3);
  int rx = region_of(regions, m, f.x);
  int ry = region_of(regions, m, f.y);
  int rz = region_of(regions, m, f.z);
  CHECK(rx >= 0);
  CHECK(ry >= 0);
  CHECK(rz >= 0);
  CHECK(rx != ry);
  CHECK(ry != rz);
  CHECK(rx != rz);

  SUBCASE("all legs long: sigma shortens to a second geodesic") {
    ShorteningOutcome g2 = starfish_long_candidate(m, f.gamma1, f.x, f.y, f.z);
    REQUIRE(g2.kind == ShorteningOutcome::Geodesic);
    double L2 = curve_length(m, g2.finalCurve);
    CHECK(L2 <= 16 * std::sqrt(2.0) * A / L1 * 1.05);
    CHECK(distinct_geodesics(m, f.gamma1, g2.finalCurve));
    CHECK(L1 * L2 <= 512.0 * A);  // Theorem 3.2 budget implies the product bound
  }

  SUBCASE("short z leg: difference-field sweepout") {
    Sweepout s = starfish_short_sweepout_z(m, f.gamma1, f.x, f.y, f.z);
    REQUIRE(s.slices.size() >= 64);
    CHECK(curve_length(m, s.slices.front()) < 3 * m.minEdge());
    CHECK(curve_length(m, s.slices.back()) < 3 * m.minEdge());
    CHECK(s.maxLength <= (2804 * std::sqrt(2.0) + 64) * A / L1 * 1.05);
    CHECK(noncontractibility_check(m, s));

    MinmaxResult r = minmax_over_sweepout(m, s, 10);
    CHECK(geodesic_residual(m, r.critical) < 0.03);
    CHECK(self_intersections(m, r.critical).empty());
    CHECK(curve_length(m, r.critical) <= s.maxLength);
  }

  SUBCASE("short x/y leg: lobe collapse, tether, and z-side collapse") {
    Sweepout s = starfish_short_sweepout_xy(m, f.gamma1, f.x, f.y, f.z);
    REQUIRE(s.slices.size() >= 40);
    CHECK(curve_length(m, s.slices.front()) < 3 * m.minEdge());
    CHECK(curve_length(m, s.slices.back()) < 3 * m.minEdge());
    CHECK(s.maxLength <= 64 * std::sqrt(2.0) * A / L1 * 1.05);
    CHECK(noncontractibility_check(m, s));
  }
}
