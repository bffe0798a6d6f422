#pragma once

#include <cmath>

#include "birkhoff/birkhoff.hpp"
#include "birkhoff/constructions.hpp"
#include "birkhoff/metric.hpp"

namespace birkhoff::testsupport {

constexpr double kPi = 3.14159265358979323846;

inline const TriMesh& sphere4() {
  static TriMesh m = generate_icosphere(4);
  return m;
}

inline SurfacePoint nearestVertexPoint(const TriMesh& m, const Vec3& q) {
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

inline ClosedCurve equator(const TriMesh& m) {
  DistanceField f = distance_field(m, nearestVertexPoint(m, {0, 0, 1}), 3);
  return level_set(f, kPi / 2).front().curve;
}

// The three-legged starfish pipeline is exercised against one shared mesh;
// gamma1 is the figure-eight geodesic around the x and y legs.
struct StarfishFixture {
  TriMesh mesh;
  SurfacePoint x, y, z;
  ClosedCurve gamma1;
};

inline StarfishFixture makeStarfish(const StarfishParams& params) {
  StarfishFixture f{generate_starfish(params), {}, {}, {}, {}};
  const TriMesh& m = f.mesh;
  double c = std::cos(2 * kPi / 3), s = std::sin(2 * kPi / 3);
  auto tip = [&](Vec3 dir) {
    int best = 0;
    double bd = -1e300;
    for (int v = 0; v < m.vertexCount(); ++v) {
      double d = dot(m.vertex(v), dir);
      if (d > bd) {
        bd = d;
        best = v;
      }
    }
    return make_vertex_point(m, best);
  };
  f.x = tip({1, 0, 0});
  f.y = tip({c, s, 0});
  f.z = tip({c, -s, 0});

  // seed: one loop around each of the two legs, joined by two crossing
  // bridges (north of x to south of y, north of y to south of x)
  double ringR = 0.5 * params.legLen;
  DistanceField dx = distance_field(m, f.x, 2), dy = distance_field(m, f.y, 2);
  ClosedCurve loopX = level_set(dx, ringR).front().curve;
  ClosedCurve loopY = level_set(dy, ringR).front().curve;
  auto nearestOn = [&](const ClosedCurve& l, Vec3 q) {
    int best = 0;
    double bd = 1e300;
    for (size_t i = 0; i < l.size(); ++i) {
      double d = dist(position(m, l.pts[i]), q);
      if (d < bd) {
        bd = d;
        best = (int)i;
      }
    }
    return best;
  };
  auto arc = [&](const ClosedCurve& l, int i, int j) {
    std::vector<SurfacePoint> p;
    int n = (int)l.size();
    for (int k = i;; k = (k + 1) % n) {
      p.push_back(l.pts[k]);
      if (k == j) break;
    }
    return p;
  };
  double zOff = 1.2 * params.legRad;
  int a1 = nearestOn(loopX, {ringR, 0, zOff});
  int a2 = nearestOn(loopX, {ringR, 0, -zOff});
  int b1 = nearestOn(loopY, {ringR * c, ringR * s, -zOff});
  int b2 = nearestOn(loopY, {ringR * c, ringR * s, zOff});
  std::vector<CurveFragment> frags;
  frags.push_back({arc(loopX, a2, a1), false});
  frags.push_back({shortest_path(m, loopX.pts[a1], loopY.pts[b1], 2).pts, false});
  frags.push_back({arc(loopY, b1, b2), false});
  frags.push_back({shortest_path(m, loopY.pts[b2], loopX.pts[a2], 2).pts, false});
  ClosedCurve eight = concatenate(m, frags, 1e-6);

  BirkhoffParams prm;
  prm.maxIter = 4000;
  f.gamma1 = birkhoff_run(m, eight, prm).finalCurve;
  return f;
}

inline const StarfishFixture& starfish() {
  static StarfishFixture f = makeStarfish(StarfishParams{8, 1, 64, {-1, -1, -1}, 0.05});
  return f;
}

// Variant with a short z leg, for the Theorem 3.3 track.
inline const StarfishFixture& starfishShortZ() {
  static StarfishFixture f = makeStarfish(StarfishParams{8, 1, 64, {-1, -1, 1.2}, 0.05});
  return f;
}

}  // namespace birkhoff::testsupport
