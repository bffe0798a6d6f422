#include <cmath>

#include "birkhoff/birkhoff.hpp"
#include "birkhoff/constructions.hpp"
#include "birkhoff/crossings.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/harness.hpp"
#include "birkhoff/metric.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_support.h"

using namespace birkhoff;
using namespace birkhoff::testsupport;

namespace {

const TriMesh& capsule16() {
  static TriMesh m = generate_capsule(0.2, 10, 16);
  return m;
}

GeodesicRecord recordOf(const TriMesh& m, const ClosedCurve& c) {
  GeodesicRecord g;
  g.curve = c;
  g.length = curve_length(m, c);
  g.residual = geodesic_residual(m, c);
  try {
    g.selfCrossings = (int)self_intersections(m, c).size();
  } catch (const NonGenericCrossing&) {
    g.selfCrossings = -1;
  }
  return g;
}

}  // namespace

TEST_CASE("find_shortest_geodesic") {
  SUBCASE("round sphere finds a great circle") {
    GeodesicRecord g = find_shortest_geodesic(sphere4(), 4);
    CHECK(g.length == doctest::Approx(2 * kPi).epsilon(0.025));
    CHECK(g.residual < 0.03);
    CHECK(!g.provenance.empty());
  }
  SUBCASE("capsule finds the waist, not the meridian") {
    GeodesicRecord g = find_shortest_geodesic(capsule16(), 4);
    CHECK(g.length == doctest::Approx(2 * kPi * 0.2).epsilon(0.03));
  }
  SUBCASE("fewer than four seeds is rejected") {
    CHECK_THROWS_AS(find_shortest_geodesic(sphere4(), 3), PreconditionError);
  }
  SUBCASE("sweep widths come back one per source") {
    std::vector<double> widths;
    GeodesicRecord g = find_shortest_geodesic(sphere4(), 4, {}, &widths);
    CHECK(widths.size() >= 4);
    for (double w : widths) CHECK(w >= g.length * (1 - 1e-9));
  }
}

TEST_CASE("classify_geodesic") {
  SUBCASE("capsule waist: two deep regions, LongSphere") {
    const TriMesh& m = capsule16();
    GeodesicRecord g = find_shortest_geodesic(m, 4);
    CaseLabel label = classify_geodesic(m, g);
    CHECK(label.kind == CaseKind::LongSphere);
    CHECK(label.dx >= label.dy);
    CHECK(label.dy > 1.0);
    CHECK(label.dz == -1);
    CHECK(label.longThreshold == doctest::Approx(170 * m.area() / g.length));
  }
  SUBCASE("starfish figure-eight: three regions, all legs long") {
    const StarfishFixture& f = starfish();
    CaseLabel label = classify_geodesic(f.mesh, recordOf(f.mesh, f.gamma1));
    CHECK(label.kind == CaseKind::StarfishAllLong);
    CHECK(label.dx >= label.dy);
    CHECK(label.dz > 0);
  }
  SUBCASE("non-generic crossings fall back") {
    GeodesicRecord g = find_shortest_geodesic(sphere4(), 4);
    g.selfCrossings = -1;
    CHECK(classify_geodesic(sphere4(), g).kind == CaseKind::GeneralFallback);
  }
}

TEST_CASE("find_second_geodesic on the round sphere") {
  const TriMesh& m = sphere4();
  GeodesicRecord g1 = find_shortest_geodesic(m, 4);
  CaseLabel label = classify_geodesic(m, g1);
  GeodesicRecord g2 = find_second_geodesic(m, g1, label);
  CHECK(g2.length == doctest::Approx(2 * kPi).epsilon(0.03));
  CHECK(g2.residual < 0.03);
  CHECK(hausdorff_distance(m, g1.curve, g2.curve) > 0.05 * g1.length);
}

TEST_CASE("verify_product") {
  const TriMesh& m = sphere4();
  GeodesicRecord g1 = find_shortest_geodesic(m, 4);
  CaseLabel label = classify_geodesic(m, g1);
  GeodesicRecord g2 = find_second_geodesic(m, g1, label);

  SUBCASE("report rows and the universal bound") {
    VerificationReport r = verify_product(m, g1, g2, label);
    CHECK(r.product == g1.length * g2.length);
    CHECK(r.ratios.size() == 5);
    bool universalSeen = false;
    for (const RatioRow& row : r.ratios) {
      if (row.constant != doctest::Approx(512e4)) continue;
      universalSeen = true;
      CHECK(row.applicable);
      CHECK(row.pass);
      CHECK(row.ratio == doctest::Approx(r.product / (512e4 * m.area())));
    }
    CHECK(universalSeen);
    CHECK(r.checks.size() == 4);
    for (const CheckRow& c : r.checks) CHECK(c.pass);
    CHECK(r.windingSignature1.size() == r.windingSignature2.size());
  }
  SUBCASE("an injected double cover fails the cover check") {
    GeodesicRecord fake = g2;
    std::vector<CurveFragment> frags{{g1.curve.pts, false}, {g1.curve.pts, false}};
    fake.curve = concatenate(m, frags, 1e-9);
    fake.length = curve_length(m, fake.curve);
    VerificationReport r = verify_product(m, g1, fake, label);
    bool coverRow = false;
    for (const CheckRow& c : r.checks)
      if (c.name == "cover-rejected") {
        coverRow = true;
        CHECK(!c.pass);
      }
    CHECK(coverRow);
  }
}

TEST_CASE("width1_check round sphere") {
  Width1Result w = width1_check(sphere4());
  CHECK(w.bound == doctest::Approx(1600 * std::sqrt(4 * kPi)).epsilon(0.01));
  CHECK(w.width == doctest::Approx(2 * kPi).epsilon(0.05));
  CHECK(w.pass);
}

TEST_CASE("report_json shape") {
  const TriMesh& m = sphere4();
  VerificationReport r = run_verification(m, "icosphere4");
  std::string s = report_json(r);
  nlohmann::json j = nlohmann::json::parse(s);
  CHECK(j["schemaVersion"] == 1);
  CHECK(j["mesh"] == "icosphere4");
  CHECK(j["area"].get<double>() == doctest::Approx(4 * kPi).epsilon(0.01));
  CHECK(j["L1"].get<double>() == doctest::Approx(2 * kPi).epsilon(0.03));
  CHECK(j["L2"].get<double>() == doctest::Approx(2 * kPi).epsilon(0.03));
  CHECK(j["product"].get<double>() ==
        doctest::Approx(j["L1"].get<double>() * j["L2"].get<double>()));
  CHECK(j["ratios"].size() == 5);
  CHECK(j["checks"].size() == 4);
  CHECK(j.contains("timings"));
  CHECK(j["case"].is_string());

  std::string bare = report_json(r, false);
  CHECK(!nlohmann::json::parse(bare).contains("timings"));
}
