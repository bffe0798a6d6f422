#include "birkhoff/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "birkhoff/errors.hpp"

namespace birkhoff {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct ChartSeg {
  int idx;      // segment index within its operand
  int operand;  // 0 = curve, 1 = other curve/path
  int p0, p1;   // point indices (for jitter lookup and adjacency tests)
  Vec2 a, b;
  SurfacePoint sa, sb;  // original endpoints rebased-compatible for lerp
};

struct SegSoup {
  std::map<int, std::vector<ChartSeg>> byFace;
};

// Raised internally when a pair is too close to tangency to classify.
struct Degenerate {};

void addSegments(const TriMesh& mesh, const std::vector<SurfacePoint>& pts, bool closed,
                 int operand, const std::vector<Vec2>& jitter, int jitterBase, SegSoup& soup) {
  int n = (int)pts.size();
  int segs = closed ? n : n - 1;
  for (int i = 0; i < segs; ++i) {
    int j = (i + 1) % n;
    int f = common_face(mesh, pts[i], pts[j]);
    if (f < 0) throw PreconditionError("crossings: consecutive points share no face");
    FaceChart chart = face_chart(mesh, f);
    ChartSeg s;
    s.idx = i;
    s.operand = operand;
    s.p0 = jitterBase + i;
    s.p1 = jitterBase + j;
    s.a = chart_point(chart, rebase(mesh, pts[i], f)) + jitter[s.p0];
    s.b = chart_point(chart, rebase(mesh, pts[j], f)) + jitter[s.p1];
    s.sa = pts[i];
    s.sb = pts[j];
    soup.byFace[f].push_back(s);
  }
}

double segPointDist2(const Vec2& a, const Vec2& b, const Vec2& p) {
  Vec2 d = b - a, w = p - a;
  double dd = d.x * d.x + d.y * d.y;
  double t = dd > 0 ? std::clamp((w.x * d.x + w.y * d.y) / dd, 0.0, 1.0) : 0.0;
  Vec2 q = {a.x + t * d.x - p.x, a.y + t * d.y - p.y};
  return q.x * q.x + q.y * q.y;
}

double segSegDist(const ChartSeg& A, const ChartSeg& B) {
  double d2 = std::min({segPointDist2(A.a, A.b, B.a), segPointDist2(A.a, A.b, B.b),
                        segPointDist2(B.a, B.b, A.a), segPointDist2(B.a, B.b, A.b)});
  return std::sqrt(d2);
}

// Transverse crossing test. Returns true and fills (s, sign) for a proper
// crossing; throws Degenerate when the pair is too close to tangency or
// overlap to classify (grazing crossing, or disjoint but nearly touching).
bool properCrossing(const ChartSeg& A, const ChartSeg& B, double touchTol, double& s,
                    int& sign) {
  Vec2 dA = A.b - A.a, dB = B.b - B.a;
  double la = std::sqrt(dA.x * dA.x + dA.y * dA.y);
  double lb = std::sqrt(dB.x * dB.x + dB.y * dB.y);
  if (la == 0 || lb == 0) return false;
  double d1 = cross2(dA, B.a - A.a), d2 = cross2(dA, B.b - A.a);
  double d3 = cross2(dB, A.a - B.a), d4 = cross2(dB, A.b - B.a);
  if (d1 * d2 < 0 && d3 * d4 < 0) {
    double band = 1e-7 * la * lb;
    if (std::abs(d1) < band || std::abs(d2) < band || std::abs(d3) < band ||
        std::abs(d4) < band)
      throw Degenerate{};
    s = d3 / (d3 - d4);
    sign = cross2(dA, dB) > 0 ? 1 : -1;
    return true;
  }
  if (segSegDist(A, B) < touchTol) throw Degenerate{};
  return false;
}

std::vector<Vec2> makeJitter(int count, double mag, unsigned seed) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ seed);
  std::uniform_real_distribution<double> u(-mag, mag);
  std::vector<Vec2> j(count);
  for (Vec2& v : j) v = {u(rng), u(rng)};
  return j;
}

std::vector<Crossing> collectCrossings(const TriMesh& mesh,
                                       const std::vector<SurfacePoint>& cpts, bool cClosed,
                                       const std::vector<SurfacePoint>* opts, bool oClosed,
                                       unsigned seed) {
  int nc = (int)cpts.size();
  int no = opts ? (int)opts->size() : 0;
  double mag = 1e-9 * mesh.minEdge();
  std::vector<Vec2> jitter = makeJitter(nc + no, mag, seed);

  SegSoup soup;
  addSegments(mesh, cpts, cClosed, 0, jitter, 0, soup);
  if (opts) addSegments(mesh, *opts, oClosed, 1, jitter, nc, soup);

  double touchTol = 10 * mag;
  std::vector<Crossing> out;
  for (auto& [f, segs] : soup.byFace) {
    for (size_t i = 0; i < segs.size(); ++i)
      for (size_t j = i + 1; j < segs.size(); ++j) {
        const ChartSeg& A = segs[i];
        const ChartSeg& B = segs[j];
        if (opts) {
          if (A.operand == B.operand) continue;  // only curve-vs-other crossings
        } else {
          if (A.p0 == B.p0 || A.p0 == B.p1 || A.p1 == B.p0 || A.p1 == B.p1)
            continue;  // adjacent segments of one curve
        }
        double s;
        int sign;
        if (!properCrossing(A.operand <= B.operand ? A : B, A.operand <= B.operand ? B : A,
                            touchTol, s, sign))
          continue;
        const ChartSeg& first = A.operand <= B.operand ? A : B;
        const ChartSeg& second = A.operand <= B.operand ? B : A;
        Crossing cr;
        cr.segA = first.idx;
        cr.segB = second.idx;
        cr.sign = sign;
        cr.at = lerp_on_face(mesh, first.sa, first.sb, s);
        out.push_back(cr);
      }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) {
    return a.segA != b.segA ? a.segA < b.segA : a.segB < b.segB;
  });
  return out;
}

template <class E>
std::vector<Crossing> withRetries(const TriMesh& mesh, const std::vector<SurfacePoint>& cpts,
                                  bool cClosed, const std::vector<SurfacePoint>* opts,
                                  bool oClosed, const char* what) {
  for (unsigned attempt = 0; attempt < 4; ++attempt) {
    try {
      return collectCrossings(mesh, cpts, cClosed, opts, oClosed, attempt);
    } catch (const Degenerate&) {
      // fresh jitter and try again
    }
  }
  throw E(what);
}

}  // namespace

std::vector<Crossing> self_intersections(const TriMesh& mesh, const ClosedCurve& c) {
  if (c.size() < 3) throw PreconditionError("self_intersections: curve too short");
  return withRetries<NonGenericCrossing>(mesh, c.pts, true, nullptr, false,
                                         "self_intersections: tangential configuration");
}

std::vector<Crossing> curve_intersections(const TriMesh& mesh, const ClosedCurve& a,
                                          const ClosedCurve& b) {
  if (a.size() < 3 || b.size() < 3)
    throw PreconditionError("curve_intersections: degenerate input");
  return withRetries<NonGenericCrossing>(mesh, a.pts, true, &b.pts, true,
                                         "curve_intersections: tangential configuration");
}

int oriented_intersection_number(const TriMesh& mesh, const ClosedCurve& c, const Path& p) {
  if (c.size() < 3 || p.size() < 2)
    throw PreconditionError("oriented_intersection_number: degenerate input");
  std::vector<Crossing> xs = withRetries<NonGenericCrossing>(
      mesh, c.pts, true, &p.pts, false, "oriented_intersection_number: tangential configuration");
  int total = 0;
  for (const Crossing& cr : xs) total += cr.sign;
  return total;
}

int winding_mod2(const SteinerGraph& graph, const ClosedCurve& c, const SurfacePoint& p,
                 const SurfacePoint& far) {
  const TriMesh& mesh = *graph.mesh;
  Path witness = shortest_path(graph, p, far);
  std::vector<Crossing> xs =
      withRetries<PathThroughCurve>(mesh, c.pts, true, &witness.pts, false,
                                    "winding_mod2: witness path not transverse to the curve");
  return (int)(xs.size() % 2);
}

int winding_mod2(const TriMesh& mesh, const ClosedCurve& c, const SurfacePoint& p,
                 const SurfacePoint& far, int perEdge) {
  auto g = build_steiner_graph(mesh, perEdge);
  return winding_mod2(*g, c, p, far);
}

}  // namespace birkhoff
