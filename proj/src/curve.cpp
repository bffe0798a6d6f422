#include "birkhoff/curve.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/errors.hpp"

namespace birkhoff {

SurfacePoint make_vertex_point(const TriMesh& mesh, int v) {
  int f = mesh.vertexFaces(v).front();
  int c = mesh.cornerOf(f, v);
  SurfacePoint p(f, 0, 0, 0);
  p.bary[c] = 1;
  return p;
}

SurfacePoint make_edge_point(const TriMesh& mesh, int e, double t) {
  const TriMesh::Edge& ed = mesh.edge(e);
  if (t <= kBaryEps) return make_vertex_point(mesh, ed.v0);
  if (t >= 1 - kBaryEps) return make_vertex_point(mesh, ed.v1);
  int f = ed.f0;
  SurfacePoint p(f, 0, 0, 0);
  p.bary[mesh.cornerOf(f, ed.v0)] = 1 - t;
  p.bary[mesh.cornerOf(f, ed.v1)] = t;
  return p;
}

SurfacePoint make_face_point(const TriMesh& mesh, int f, double b0, double b1, double b2) {
  (void)mesh;
  double s = b0 + b1 + b2;
  return SurfacePoint(f, b0 / s, b1 / s, b2 / s);
}

Vec3 position(const TriMesh& mesh, const SurfacePoint& p) {
  const auto& fv = mesh.face(p.face);
  return mesh.vertex(fv[0]) * p.bary[0] + mesh.vertex(fv[1]) * p.bary[1] +
         mesh.vertex(fv[2]) * p.bary[2];
}

int vertex_of(const TriMesh& mesh, const SurfacePoint& p) {
  for (int c = 0; c < 3; ++c)
    if (p.bary[c] >= 1 - kBaryEps) return mesh.face(p.face)[c];
  return -1;
}

int edge_of(const TriMesh& mesh, const SurfacePoint& p) {
  if (vertex_of(mesh, p) >= 0) return -1;
  for (int c = 0; c < 3; ++c)
    if (p.bary[c] <= kBaryEps) return mesh.faceEdge(p.face, c);
  return -1;
}

std::vector<int> faces_of(const TriMesh& mesh, const SurfacePoint& p) {
  int v = vertex_of(mesh, p);
  if (v >= 0) return mesh.vertexFaces(v);
  int e = edge_of(mesh, p);
  if (e >= 0) return {mesh.edge(e).f0, mesh.edge(e).f1};
  return {p.face};
}

int common_face(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& b) {
  std::vector<int> fa = faces_of(mesh, a);
  std::vector<int> fb = faces_of(mesh, b);
  int best = -1;
  for (int f : fa)
    for (int g : fb)
      if (f == g && (best < 0 || f < best)) best = f;
  return best;
}

SurfacePoint rebase(const TriMesh& mesh, const SurfacePoint& p, int f) {
  if (p.face == f) return p;
  int v = vertex_of(mesh, p);
  if (v >= 0) {
    int c = mesh.cornerOf(f, v);
    if (c < 0) throw PreconditionError("rebase: vertex point not on target face");
    SurfacePoint q(f, 0, 0, 0);
    q.bary[c] = 1;
    return q;
  }
  int e = edge_of(mesh, p);
  if (e < 0) throw PreconditionError("rebase: interior point not on target face");
  const TriMesh::Edge& ed = mesh.edge(e);
  int c0 = mesh.cornerOf(p.face, ed.v0);
  double t = 1 - p.bary[c0];  // param from v0 to v1
  int d0 = mesh.cornerOf(f, ed.v0), d1 = mesh.cornerOf(f, ed.v1);
  if (d0 < 0 || d1 < 0) throw PreconditionError("rebase: edge point not on target face");
  SurfacePoint q(f, 0, 0, 0);
  q.bary[d0] = 1 - t;
  q.bary[d1] = t;
  return q;
}

FaceChart face_chart(const TriMesh& mesh, int f) {
  const auto& fv = mesh.face(f);
  const Vec3 &p0 = mesh.vertex(fv[0]), &p1 = mesh.vertex(fv[1]), &p2 = mesh.vertex(fv[2]);
  Vec3 ex = normalize(p1 - p0);
  Vec3 n = normalize(cross(p1 - p0, p2 - p0));
  Vec3 ey = cross(n, ex);
  FaceChart ch;
  ch.corners[0] = {0, 0};
  ch.corners[1] = {norm(p1 - p0), 0};
  ch.corners[2] = {dot(p2 - p0, ex), dot(p2 - p0, ey)};
  return ch;
}

Vec2 chart_point(const FaceChart& chart, const SurfacePoint& p) {
  return chart.corners[0] * p.bary[0] + chart.corners[1] * p.bary[1] +
         chart.corners[2] * p.bary[2];
}

void check_valid(const TriMesh& mesh, const Path& p) {
  if (p.pts.size() < 2) throw PreconditionError("path needs >= 2 points");
  for (size_t i = 0; i + 1 < p.pts.size(); ++i)
    if (common_face(mesh, p.pts[i], p.pts[i + 1]) < 0)
      throw PreconditionError("path points " + std::to_string(i) + "," + std::to_string(i + 1) +
                              " share no face");
}

void check_valid(const TriMesh& mesh, const ClosedCurve& c) {
  if (c.pts.size() < 3) throw PreconditionError("closed curve needs >= 3 points");
  for (size_t i = 0; i < c.pts.size(); ++i)
    if (common_face(mesh, c.pts[i], c.pts[(i + 1) % c.pts.size()]) < 0)
      throw PreconditionError("curve points " + std::to_string(i) + " and next share no face");
}

double curve_length(const TriMesh& mesh, const Path& p) {
  double len = 0;
  for (size_t i = 0; i + 1 < p.pts.size(); ++i)
    len += dist(position(mesh, p.pts[i]), position(mesh, p.pts[i + 1]));
  return len;
}

double curve_length(const TriMesh& mesh, const ClosedCurve& c) {
  double len = 0;
  size_t n = c.pts.size();
  for (size_t i = 0; i < n; ++i)
    len += dist(position(mesh, c.pts[i]), position(mesh, c.pts[(i + 1) % n]));
  return len;
}

SurfacePoint lerp_on_face(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& b,
                          double t) {
  int f = common_face(mesh, a, b);
  if (f < 0) throw PreconditionError("lerp_on_face: points share no face");
  SurfacePoint ra = rebase(mesh, a, f), rb = rebase(mesh, b, f);
  SurfacePoint out(f, 0, 0, 0);
  for (int c = 0; c < 3; ++c) out.bary[c] = (1 - t) * ra.bary[c] + t * rb.bary[c];
  return out;
}

ClosedCurve resample(const TriMesh& mesh, const ClosedCurve& c, int n) {
  if (n < 3) throw PreconditionError("resample needs n >= 3");
  size_t m = c.pts.size();
  std::vector<double> segLen(m), cum(m + 1, 0);
  for (size_t i = 0; i < m; ++i) {
    segLen[i] = dist(position(mesh, c.pts[i]), position(mesh, c.pts[(i + 1) % m]));
    cum[i + 1] = cum[i] + segLen[i];
  }
  double total = cum[m];
  if (!(total > 0)) throw PreconditionError("resample: zero-length curve");

  ClosedCurve out;
  size_t seg = 0;
  for (int k = 0; k < n; ++k) {
    double target = total * k / n;
    while (seg + 1 <= m && cum[seg + 1] < target - 1e-15 * total) {
      // keep original geometry between breaks
      out.pts.push_back(c.pts[(seg + 1) % m]);
      ++seg;
    }
    double local = segLen[seg] > 0 ? (target - cum[seg]) / segLen[seg] : 0;
    local = std::clamp(local, 0.0, 1.0);
    SurfacePoint s = local <= 1e-12
                         ? c.pts[seg % m]
                         : lerp_on_face(mesh, c.pts[seg % m], c.pts[(seg + 1) % m], local);
    out.breaks.push_back((int)out.pts.size());
    out.pts.push_back(s);
  }
  // tail of the original geometry back to the start
  while (seg + 1 < m) {
    out.pts.push_back(c.pts[seg + 1]);
    ++seg;
  }
  // drop consecutive duplicates (within 1e-13 of each other)
  ClosedCurve cleaned;
  double tol = 1e-13 * std::max(1.0, total);
  std::vector<int> isBreak(out.pts.size(), 0);
  for (int b : out.breaks) isBreak[b] = 1;
  for (size_t i = 0; i < out.pts.size(); ++i) {
    if (!cleaned.pts.empty() &&
        dist(position(mesh, cleaned.pts.back()), position(mesh, out.pts[i])) < tol && !isBreak[i])
      continue;
    if (!cleaned.pts.empty() && isBreak[i] &&
        dist(position(mesh, cleaned.pts.back()), position(mesh, out.pts[i])) < tol &&
        !cleaned.breaks.empty() && cleaned.breaks.back() == (int)cleaned.pts.size() - 1)
      continue;  // break collides with previous break
    if (isBreak[i]) {
      if (!cleaned.pts.empty() &&
          dist(position(mesh, cleaned.pts.back()), position(mesh, out.pts[i])) < tol) {
        cleaned.breaks.push_back((int)cleaned.pts.size() - 1);
        continue;
      }
      cleaned.breaks.push_back((int)cleaned.pts.size());
    }
    cleaned.pts.push_back(out.pts[i]);
  }
  if (cleaned.pts.size() < 3) return c;
  return cleaned;
}

Path sub_polyline(const ClosedCurve& c, int bi, int bj) {
  int nb = (int)c.breaks.size();
  int from = c.breaks[bi % nb], to = c.breaks[bj % nb];
  Path p;
  int n = (int)c.pts.size();
  int i = from;
  p.pts.push_back(c.pts[i]);
  while (i != to) {
    i = (i + 1) % n;
    p.pts.push_back(c.pts[i]);
  }
  return p;
}

ClosedCurve concatenate(const TriMesh& mesh, const std::vector<CurveFragment>& pieces,
                        double tol) {
  if (pieces.empty()) throw PreconditionError("concatenate: no fragments");
  std::vector<SurfacePoint> all;
  for (const CurveFragment& frag : pieces) {
    std::vector<SurfacePoint> pts = frag.pts;
    if (frag.reversed) std::reverse(pts.begin(), pts.end());
    if (all.empty()) {
      all = pts;
      continue;
    }
    double gap = dist(position(mesh, all.back()), position(mesh, pts.front()));
    if (gap > tol)
      throw GapTooLarge("fragment endpoints are " + std::to_string(gap) + " apart (tol " +
                        std::to_string(tol) + ")");
    size_t start = gap < 1e-12 ? 1 : 0;  // drop exact duplicate endpoint
    for (size_t i = start; i < pts.size(); ++i) all.push_back(pts[i]);
  }
  // close the loop
  double gap = dist(position(mesh, all.back()), position(mesh, all.front()));
  if (gap > tol) throw GapTooLarge("loop closure gap " + std::to_string(gap));
  if (gap < 1e-12) all.pop_back();
  ClosedCurve out;
  out.pts = std::move(all);
  check_valid(mesh, out);
  return out;
}

namespace {
double pointSegDist(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double d2 = norm2(ab);
  double t = d2 > 0 ? std::clamp(dot(p - a, ab) / d2, 0.0, 1.0) : 0.0;
  return dist(p, a + ab * t);
}

std::vector<Vec3> sampledPoints(const TriMesh& mesh, const std::vector<SurfacePoint>& pts,
                                bool closed, int perSeg) {
  std::vector<Vec3> out;
  size_t n = pts.size();
  size_t nn = closed ? n : n - 1;
  for (size_t i = 0; i < nn; ++i) {
    Vec3 a = position(mesh, pts[i]);
    Vec3 b = position(mesh, pts[(i + 1) % n]);
    for (int k = 0; k < perSeg; ++k) out.push_back(a + (b - a) * ((double)k / perSeg));
  }
  return out;
}

double oneSidedHausdorff(const std::vector<Vec3>& from, const TriMesh& mesh,
                         const std::vector<SurfacePoint>& to, bool closed) {
  double worst = 0;
  size_t n = to.size();
  size_t nn = closed ? n : n - 1;
  std::vector<Vec3> pos(n);
  for (size_t i = 0; i < n; ++i) pos[i] = position(mesh, to[i]);
  for (const Vec3& p : from) {
    double best = 1e300;
    for (size_t i = 0; i < nn; ++i) best = std::min(best, pointSegDist(p, pos[i], pos[(i + 1) % n]));
    worst = std::max(worst, best);
  }
  return worst;
}
}  // namespace

double hausdorff_distance(const TriMesh& mesh, const ClosedCurve& a, const ClosedCurve& b) {
  auto sa = sampledPoints(mesh, a.pts, true, 4);
  auto sb = sampledPoints(mesh, b.pts, true, 4);
  return std::max(oneSidedHausdorff(sa, mesh, b.pts, true), oneSidedHausdorff(sb, mesh, a.pts, true));
}

double distance_to_curve(const TriMesh& mesh, const Vec3& p, const ClosedCurve& c) {
  double best = 1e300;
  size_t n = c.pts.size();
  for (size_t i = 0; i < n; ++i)
    best = std::min(best, pointSegDist(p, position(mesh, c.pts[i]),
                                       position(mesh, c.pts[(i + 1) % n])));
  return best;
}

double distance_to_curve(const TriMesh& mesh, const Vec3& p, const Path& c) {
  double best = 1e300;
  for (size_t i = 0; i + 1 < c.pts.size(); ++i)
    best = std::min(best, pointSegDist(p, position(mesh, c.pts[i]), position(mesh, c.pts[i + 1])));
  return best;
}

Vec3 centroid(const TriMesh& mesh, const ClosedCurve& c) {
  // length-weighted centroid of the polyline
  Vec3 acc{0, 0, 0};
  double total = 0;
  size_t n = c.pts.size();
  for (size_t i = 0; i < n; ++i) {
    Vec3 a = position(mesh, c.pts[i]), b = position(mesh, c.pts[(i + 1) % n]);
    double l = dist(a, b);
    acc += (a + b) * (0.5 * l);
    total += l;
  }
  return total > 0 ? acc / total : position(mesh, c.pts[0]);
}

SurfacePoint nearest_curve_point(const TriMesh& mesh, const ClosedCurve& c, const Vec3& q) {
  double best = 1e300;
  size_t bestI = 0;
  for (size_t i = 0; i < c.pts.size(); ++i) {
    double d = dist(position(mesh, c.pts[i]), q);
    if (d < best) {
      best = d;
      bestI = i;
    }
  }
  return c.pts[bestI];
}

bool length_multiple_of(double lenA, double lenB, int maxK) {
  for (int k = 1; k <= maxK; ++k)
    if (std::abs(lenB - k * lenA) <= 0.02 * lenA) return true;
  return false;
}

bool distinct_geodesics(const TriMesh& mesh, const ClosedCurve& a, const ClosedCurve& b) {
  double la = curve_length(mesh, a), lb = curve_length(mesh, b);
  if (hausdorff_distance(mesh, a, b) > 0.05 * std::min(la, lb)) return true;
  return !length_multiple_of(std::min(la, lb), std::max(la, lb));
}

}  // namespace birkhoff
