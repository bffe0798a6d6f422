#include "birkhoff/straighten.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <set>

#include "birkhoff/errors.hpp"

namespace birkhoff {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
Vec2 cmul(const Vec2& u, const Vec2& v) {
  return {u.x * v.x - u.y * v.y, u.x * v.y + u.y * v.x};
}

bool pointOnFace(const TriMesh& mesh, const SurfacePoint& p, int f) {
  for (int g : faces_of(mesh, p))
    if (g == f) return true;
  return false;
}

// Planar isometry z -> t + r * (flip ? conj(z) : z), complex-style.
struct Iso {
  Vec2 r{1, 0};
  bool flip = false;
  Vec2 t{0, 0};

  Vec2 apply(Vec2 z) const {
    if (flip) z.y = -z.y;
    return t + cmul(r, z);
  }
  // (*this) after `inner`: apply(inner.apply(z))
  Iso compose(const Iso& inner) const {
    Iso out;
    Vec2 ri = inner.r, ti = inner.t;
    if (flip) {
      ri.y = -ri.y;
      ti.y = -ti.y;
    }
    out.r = cmul(r, ri);
    out.flip = flip != inner.flip;
    out.t = t + cmul(r, ti);
    return out;
  }
};

// Isometry taking fOther's chart into fBase's chart plane, unfolding flat
// across their shared edge e.
Iso localUnfold(const TriMesh& mesh, int fBase, int e) {
  const TriMesh::Edge& ed = mesh.edge(e);
  int fOther = ed.f0 == fBase ? ed.f1 : ed.f0;
  FaceChart cb = face_chart(mesh, fBase), co = face_chart(mesh, fOther);
  int cb0 = mesh.cornerOf(fBase, ed.v0), cb1 = mesh.cornerOf(fBase, ed.v1);
  int co0 = mesh.cornerOf(fOther, ed.v0), co1 = mesh.cornerOf(fOther, ed.v1);
  Vec2 a0 = cb.corners[cb0], b0 = cb.corners[cb1];
  Vec2 a1 = co.corners[co0], b1 = co.corners[co1];
  Vec2 d0 = b0 - a0, d1 = b1 - a1;
  double n1 = dot(d1, d1);

  Iso rot;
  rot.r = {(d0.x * d1.x + d0.y * d1.y) / n1, (d0.y * d1.x - d0.x * d1.y) / n1};  // d0/d1
  rot.t = a0 - cmul(rot.r, a1);
  Iso refl;
  refl.flip = true;
  refl.r = cmul(d0, d1) / n1;  // d0/conj(d1)
  refl.t = a0 - cmul(refl.r, Vec2{a1.x, -a1.y});

  // pick the branch that puts fOther's apex opposite fBase's apex
  Vec2 apexBase = cb.corners[3 - cb0 - cb1];
  Vec2 apexOther = co.corners[3 - co0 - co1];
  double sBase = cross2(d0, apexBase - a0);
  bool useRot = cross2(d0, rot.apply(apexOther) - a0) * sBase < 0;
  return useRot ? rot : refl;
}

Vec2 unfoldAcross(const TriMesh& mesh, int fBase, int e, const SurfacePoint& x) {
  const TriMesh::Edge& ed = mesh.edge(e);
  int fOther = ed.f0 == fBase ? ed.f1 : ed.f0;
  FaceChart co = face_chart(mesh, fOther);
  return localUnfold(mesh, fBase, e).apply(chart_point(co, rebase(mesh, x, fOther)));
}

double angle3(const Vec3& u, const Vec3& v) {
  double nu = norm(u), nv = norm(v);
  if (nu < 1e-300 || nv < 1e-300) return 0;
  return std::acos(std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0));
}
double angle2(const Vec2& u, const Vec2& v) {
  double nu = std::sqrt(dot(u, u)), nv = std::sqrt(dot(v, v));
  if (nu < 1e-300 || nv < 1e-300) return 0;
  return std::acos(std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0));
}

// The fan of faces around vertex v in rotational order, with the cumulative
// unrolled angle of each boundary ray.
struct VertexFan {
  int v;
  std::vector<int> faces;       // cyclic order
  std::vector<int> entry;       // entry vertex of each face (ray at cum[k])
  std::vector<int> exitEdge;    // edge (v, exit vertex) between face k and k+1
  std::vector<double> cum;      // cum[k] = unrolled angle of face k's entry ray
  double total = 0;             // cone angle at v
};

VertexFan buildFan(const TriMesh& mesh, int v) {
  VertexFan fan;
  fan.v = v;
  int f = mesh.vertexFaces(v).front();
  int c = mesh.cornerOf(f, v);
  int entry = mesh.face(f)[(c + 1) % 3];
  int first = f, firstEntry = entry;
  const Vec3& pv = mesh.vertex(v);
  do {
    int cc = mesh.cornerOf(f, v);
    const auto& fv = mesh.face(f);
    int other1 = fv[(cc + 1) % 3], other2 = fv[(cc + 2) % 3];
    int exit = entry == other1 ? other2 : other1;
    fan.faces.push_back(f);
    fan.entry.push_back(entry);
    fan.cum.push_back(fan.total);
    fan.total += angle3(mesh.vertex(entry) - pv, mesh.vertex(exit) - pv);
    int e = mesh.edgeBetween(v, exit);
    fan.exitEdge.push_back(e);
    const TriMesh::Edge& ed = mesh.edge(e);
    f = ed.f0 == f ? ed.f1 : ed.f0;
    entry = exit;
  } while (!(f == first && entry == firstEntry));
  return fan;
}

// Unrolled angular position of x (not at v) around the fan, in [0, total).
double fanAngle(const TriMesh& mesh, const VertexFan& fan, const SurfacePoint& x) {
  const Vec3& pv = mesh.vertex(fan.v);
  for (size_t k = 0; k < fan.faces.size(); ++k) {
    if (!pointOnFace(mesh, x, fan.faces[k])) continue;
    double a = angle3(mesh.vertex(fan.entry[k]) - pv, position(mesh, x) - pv);
    return fan.cum[k] + a;
  }
  return -1;
}

double polyLen(const TriMesh& mesh, const std::vector<SurfacePoint>& pts, bool closed) {
  double len = 0;
  size_t n = pts.size(), nn = closed ? n : n - 1;
  for (size_t i = 0; i < nn; ++i)
    len += dist(position(mesh, pts[i]), position(mesh, pts[(i + 1) % n]));
  return len;
}

// Convex 1D minimization by golden section.
template <class F>
double goldenMin(F f, double lo, double hi, int iters = 90) {
  const double g = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// Slide an interior edge point to the locally optimal position on its edge.
// Returns the improved replacement, or nullopt when no strict improvement.
std::optional<SurfacePoint> slideEdgePoint(const TriMesh& mesh, const SurfacePoint& prev,
                                           const SurfacePoint& p, const SurfacePoint& next) {
  int e = edge_of(mesh, p);
  const TriMesh::Edge& ed = mesh.edge(e);
  int fBase = -1;
  for (int f : {ed.f0, ed.f1})
    if (pointOnFace(mesh, prev, f)) fBase = f;
  if (fBase < 0) return std::nullopt;
  bool nextOnBase = pointOnFace(mesh, next, fBase);
  bool nextOnOther = pointOnFace(mesh, next, ed.f0 == fBase ? ed.f1 : ed.f0);
  if (!nextOnBase && !nextOnOther) return std::nullopt;

  FaceChart cb = face_chart(mesh, fBase);
  Vec2 a2 = chart_point(cb, rebase(mesh, prev, fBase));
  Vec2 b2 = nextOnBase ? chart_point(cb, rebase(mesh, next, fBase))
                       : unfoldAcross(mesh, fBase, e, next);
  Vec2 e0 = cb.corners[mesh.cornerOf(fBase, ed.v0)];
  Vec2 e1 = cb.corners[mesh.cornerOf(fBase, ed.v1)];
  auto cost = [&](double t) {
    Vec2 x = e0 * (1 - t) + e1 * t;
    Vec2 u = a2 - x, w = b2 - x;
    return std::sqrt(dot(u, u)) + std::sqrt(dot(w, w));
  };
  double t = goldenMin(cost, 0.0, 1.0);
  SurfacePoint cand = make_edge_point(mesh, e, t);
  Vec3 pp = position(mesh, p), pc = position(mesh, cand);
  Vec3 pa = position(mesh, prev), pb = position(mesh, next);
  double oldL = dist(pa, pp) + dist(pp, pb);
  double newL = dist(pa, pc) + dist(pc, pb);
  if (newL >= oldL - 1e-15 * oldL) return std::nullopt;
  if (common_face(mesh, prev, cand) < 0 || common_face(mesh, cand, next) < 0) return std::nullopt;
  return cand;
}

// Reroute a vertex point through the thinner cone wedge. Returns the
// replacement points (edge points on the interior fan rays) on improvement.
std::optional<std::vector<SurfacePoint>> rerouteVertex(const TriMesh& mesh,
                                                       const SurfacePoint& prev,
                                                       const SurfacePoint& p,
                                                       const SurfacePoint& next) {
  int v = vertex_of(mesh, p);
  VertexFan fan = buildFan(mesh, v);
  double phiA = fanAngle(mesh, fan, prev), phiB = fanAngle(mesh, fan, next);
  if (phiA < 0 || phiB < 0) return std::nullopt;
  double fwd = std::fmod(phiB - phiA + 2 * fan.total, fan.total);
  bool goForward = fwd <= fan.total - fwd;
  double theta = goForward ? fwd : fan.total - fwd;
  if (theta >= kPi - 1e-12) return std::nullopt;  // locally geodesic through the cone

  const Vec3& pv = mesh.vertex(v);
  double ra = dist(position(mesh, prev), pv), rb = dist(position(mesh, next), pv);
  if (ra < 1e-14 || rb < 1e-14) return std::nullopt;
  Vec2 a2{ra, 0};
  Vec2 b2{rb * std::cos(theta), rb * std::sin(theta)};

  // interior rays between phiA and phiB in the chosen direction
  std::vector<std::pair<double, int>> rays;  // (angle from a, exit edge)
  size_t nf = fan.faces.size();
  for (size_t k = 0; k < nf; ++k) {
    double phi = fan.cum[(k + 1) % nf];  // ray between face k and k+1
    if ((k + 1) % nf == 0) phi = fan.total;
    double rel = goForward ? std::fmod(phi - phiA + 2 * fan.total, fan.total)
                           : std::fmod(phiA - phi + 2 * fan.total, fan.total);
    if (rel > 1e-12 && rel < theta - 1e-12) rays.push_back({rel, fan.exitEdge[k]});
  }
  if (rays.empty()) return std::nullopt;
  std::sort(rays.begin(), rays.end());

  std::vector<SurfacePoint> out;
  for (auto [beta, e] : rays) {
    Vec2 dir{std::cos(beta), std::sin(beta)};
    double denom = cross2(dir, b2 - a2);
    if (std::abs(denom) < 1e-300) return std::nullopt;
    double u = cross2(a2, dir) / denom;
    Vec2 hit = a2 + (b2 - a2) * u;
    double rho = dot(dir, hit);
    const TriMesh::Edge& ed = mesh.edge(e);
    double len = ed.length;
    double t = std::clamp(rho / len, 1e-6, 1.0 - 1e-6);
    out.push_back(make_edge_point(mesh, e, ed.v0 == v ? t : 1 - t));
  }

  // strict-improvement gate in 3D
  Vec3 pa = position(mesh, prev), pb = position(mesh, next), pp = position(mesh, p);
  double oldL = dist(pa, pp) + dist(pp, pb);
  double newL = 0;
  Vec3 cur = pa;
  for (const SurfacePoint& s : out) {
    Vec3 q = position(mesh, s);
    newL += dist(cur, q);
    cur = q;
  }
  newL += dist(cur, pb);
  if (newL >= oldL - 1e-15 * oldL) return std::nullopt;
  SurfacePoint last = prev;
  for (const SurfacePoint& s : out) {
    if (common_face(mesh, last, s) < 0) return std::nullopt;
    last = s;
  }
  if (common_face(mesh, last, next) < 0) return std::nullopt;
  return out;
}

// ---- strip funnel ----------------------------------------------------------

struct Portal {
  Vec2 L, R;
  int vidL, vidR;
  int edge;
};

double triarea2(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(c - a, b - a); }
bool veq(const Vec2& a, const Vec2& b) { return dist(a, b) < 1e-14; }

// Exact shortest path between the endpoints of `sub` through the triangle
// strip it currently traverses, by unfolding the strip flat and running the
// funnel algorithm. The result bends only at strip vertices, which the vertex
// reroute pass relaxes afterwards. Returns a strictly shorter replacement.
std::optional<std::vector<SurfacePoint>> funnelStrip(const TriMesh& mesh,
                                                     const std::vector<SurfacePoint>& sub) {
  size_t n = sub.size();
  if (n < 3) return std::nullopt;
  double oldLen = polyLen(mesh, sub, false);

  std::vector<int> faces;
  for (size_t i = 0; i + 1 < n; ++i) {
    int f = common_face(mesh, sub[i], sub[i + 1]);
    if (f < 0) return std::nullopt;
    if (faces.empty() || faces.back() != f) faces.push_back(f);
  }
  if (faces.size() == 1) {
    std::vector<SurfacePoint> rep{sub.front(), sub.back()};
    double newLen = dist(position(mesh, rep[0]), position(mesh, rep[1]));
    if (newLen < oldLen - 1e-15 * oldLen) return rep;
    return std::nullopt;
  }

  // unfold the strip; A[i] maps chart(faces[i]) into the plane of faces[0]
  size_t nf = faces.size();
  std::vector<Iso> A(nf);
  std::vector<Portal> portals;
  for (size_t i = 0; i + 1 < nf; ++i) {
    int e = -1;
    for (int s = 0; s < 3; ++s) {
      int ee = mesh.faceEdge(faces[i], s);
      const auto& ed = mesh.edge(ee);
      if (ed.f0 == faces[i + 1] || ed.f1 == faces[i + 1]) {
        e = ee;
        break;
      }
    }
    if (e < 0) return std::nullopt;  // faces share only a vertex: not a strip
    A[i + 1] = A[i].compose(localUnfold(mesh, faces[i], e));
    const auto& ed = mesh.edge(e);
    FaceChart ci = face_chart(mesh, faces[i]);
    Portal p;
    p.edge = e;
    p.vidL = ed.v0;
    p.vidR = ed.v1;
    p.L = A[i].apply(ci.corners[mesh.cornerOf(faces[i], ed.v0)]);
    p.R = A[i].apply(ci.corners[mesh.cornerOf(faces[i], ed.v1)]);
    portals.push_back(p);
  }
  Vec2 a2 =
      A[0].apply(chart_point(face_chart(mesh, faces[0]), rebase(mesh, sub.front(), faces[0])));
  Vec2 b2 = A[nf - 1].apply(
      chart_point(face_chart(mesh, faces[nf - 1]), rebase(mesh, sub.back(), faces[nf - 1])));

  // orient portals: L on the traveller's left, propagated via shared vertices
  for (size_t i = 0; i < portals.size(); ++i) {
    Portal& p = portals[i];
    bool doSwap;
    if (i == 0) {
      doSwap = cross2(p.R - a2, p.L - a2) < 0;
    } else {
      const Portal& q = portals[i - 1];
      doSwap = p.vidL == q.vidR || p.vidR == q.vidL;
      if (p.vidL == q.vidL || p.vidR == q.vidR) doSwap = false;
    }
    if (doSwap) {
      std::swap(p.L, p.R);
      std::swap(p.vidL, p.vidR);
    }
  }

  // portal arrays with degenerate start/end portals
  size_t m = portals.size();
  std::vector<Vec2> pl(m + 2), pr(m + 2);
  pl[0] = pr[0] = a2;
  for (size_t i = 0; i < m; ++i) {
    pl[i + 1] = portals[i].L;
    pr[i + 1] = portals[i].R;
  }
  pl[m + 1] = pr[m + 1] = b2;

  struct Apex {
    Vec2 pos;
    size_t idx;  // index into pl/pr
    int vid;     // mesh vertex, -1 for path endpoints
  };
  std::vector<Apex> chain;
  chain.push_back({a2, 0, -1});
  Vec2 apex = a2, left = a2, right = a2;
  size_t apexI = 0, leftI = 0, rightI = 0;
  size_t guard = 0, guardMax = 16 * (m + 2);
  for (size_t i = 1; i <= m + 1; ++i) {
    if (++guard > guardMax) return std::nullopt;
    Vec2 l = pl[i], r = pr[i];
    if (triarea2(apex, right, r) <= 0) {
      if (veq(apex, right) || triarea2(apex, left, r) > 0) {
        right = r;
        rightI = i;
      } else {
        chain.push_back({left, leftI, leftI >= 1 && leftI <= m ? portals[leftI - 1].vidL : -1});
        apex = left;
        apexI = leftI;
        left = right = apex;
        leftI = rightI = apexI;
        i = apexI;
        continue;
      }
    }
    if (triarea2(apex, left, l) >= 0) {
      if (veq(apex, left) || triarea2(apex, right, l) < 0) {
        left = l;
        leftI = i;
      } else {
        chain.push_back(
            {right, rightI, rightI >= 1 && rightI <= m ? portals[rightI - 1].vidR : -1});
        apex = right;
        apexI = rightI;
        left = right = apex;
        leftI = rightI = apexI;
        i = apexI;
        continue;
      }
    }
  }
  chain.push_back({b2, m + 1, -1});

  // back to surface points: crossings with skipped portals + vertex apexes
  std::vector<SurfacePoint> rep;
  rep.push_back(sub.front());
  for (size_t k = 0; k + 1 < chain.size(); ++k) {
    const Apex& u = chain[k];
    const Apex& w = chain[k + 1];
    for (size_t j = u.idx + 1; j < w.idx; ++j) {
      const Portal& P = portals[j - 1];
      Vec2 d = P.R - P.L;
      double den = cross2(u.pos - w.pos, d);
      double tt = std::abs(den) < 1e-300 ? 0.5 : cross2(u.pos - P.L, d) / den;
      Vec2 hit = u.pos + (w.pos - u.pos) * tt;
      double s = std::clamp(dot(hit - P.L, d) / dot(d, d), 1e-9, 1 - 1e-9);
      const auto& ed = mesh.edge(P.edge);
      rep.push_back(make_edge_point(mesh, P.edge, P.vidL == ed.v0 ? s : 1 - s));
    }
    if (w.vid >= 0) rep.push_back(make_vertex_point(mesh, w.vid));
  }
  rep.push_back(sub.back());

  double newLen = polyLen(mesh, rep, false);
  if (newLen >= oldLen - 1e-15 * oldLen) return std::nullopt;
  for (size_t i = 0; i + 1 < rep.size(); ++i)
    if (common_face(mesh, rep[i], rep[i + 1]) < 0) return std::nullopt;
  return rep;
}

// Funnel every maximal sub-path between pins (fixed endpoints and vertex
// points, where the strip unfolding has to stop).
bool funnelPass(const TriMesh& mesh, std::vector<SurfacePoint>& pts, bool closed) {
  size_t n = pts.size();
  std::vector<size_t> pins;
  if (!closed) pins.push_back(0);
  for (size_t i = closed ? 0 : 1; i + (closed ? 0 : 1) < n; ++i)
    if (vertex_of(mesh, pts[i]) >= 0) pins.push_back(i);
  if (!closed) pins.push_back(n - 1);
  if (closed && pins.empty()) pins.push_back(0);

  auto subRange = [&](size_t a, size_t b) {
    std::vector<SurfacePoint> s;
    size_t i = a;
    s.push_back(pts[i]);
    do {
      i = (i + 1) % n;
      s.push_back(pts[i]);
    } while (i != b);
    return s;
  };

  bool changed = false;
  std::vector<SurfacePoint> out;
  size_t nSpans = closed ? pins.size() : pins.size() - 1;
  for (size_t k = 0; k < nSpans; ++k) {
    size_t a = pins[k], b = pins[(k + 1) % pins.size()];
    std::vector<SurfacePoint> sub = (a == b && closed && pins.size() == 1)
                                        ? subRange(a, a)
                                        : subRange(a, b);
    if (auto rep = funnelStrip(mesh, sub)) {
      sub = *rep;
      changed = true;
    }
    // append, dropping the duplicated trailing pin
    out.insert(out.end(), sub.begin(), sub.end() - 1);
  }
  if (!closed) out.push_back(pts.back());
  if (changed && out.size() >= (closed ? 3u : 2u)) pts = std::move(out);
  return changed;
}

// Points that drift within 1e-7 (barycentric) of a vertex are snapped onto it,
// so the whole face fan becomes visible to the removal / reroute passes.
// Positions move by at most 1e-7 * edge length.
bool snapPass(const TriMesh& mesh, std::vector<SurfacePoint>& pts) {
  bool changed = false;
  for (SurfacePoint& p : pts) {
    if (vertex_of(mesh, p) >= 0) continue;
    for (int c = 0; c < 3; ++c) {
      if (p.bary[c] >= 1 - 1e-7) {
        p = make_vertex_point(mesh, mesh.face(p.face)[c]);
        changed = true;
        break;
      }
    }
  }
  return changed;
}

// Collapse zero-length segments (coincident consecutive points).
bool dedupePass(const TriMesh& mesh, std::vector<SurfacePoint>& pts, bool closed) {
  bool changed = false;
  size_t minPts = closed ? 3 : 2;
  double tol = 1e-12 * std::max(1.0, mesh.maxEdge());
  size_t i = 0;
  while (pts.size() > minPts && i < pts.size()) {
    size_t n = pts.size();
    size_t j = (i + 1) % n;
    if (!closed && j == 0) break;
    if (dist(position(mesh, pts[i]), position(mesh, pts[j])) < tol) {
      // drop whichever of the pair keeps the polyline face-connected,
      // preferring to keep a vertex point (widest face fan)
      size_t drop = vertex_of(mesh, pts[i]) >= 0 ? j : i;
      if (!closed && (drop == 0 || drop == n - 1)) drop = drop == 0 ? j : i;
      if (!closed && (drop == 0 || drop == n - 1)) {
        ++i;
        continue;
      }
      size_t before = (drop + n - 1) % n, after = (drop + 1) % n;
      if (common_face(mesh, pts[before], pts[after]) >= 0) {
        pts.erase(pts.begin() + drop);
        changed = true;
        if (drop < i) --i;
        continue;
      }
    }
    ++i;
  }
  return changed;
}

// One sweep of point removals; always safe (3D triangle inequality).
bool removalPass(const TriMesh& mesh, std::vector<SurfacePoint>& pts, bool closed) {
  bool changed = false;
  size_t minPts = closed ? 3 : 2;
  size_t i = closed ? 0 : 1;
  while (pts.size() > minPts && i < pts.size()) {
    if (!closed && i + 1 >= pts.size()) break;
    size_t n = pts.size();
    const SurfacePoint& prev = pts[(i + n - 1) % n];
    const SurfacePoint& next = pts[(i + 1) % n];
    if (common_face(mesh, prev, next) >= 0) {
      Vec3 pa = position(mesh, prev), pp = position(mesh, pts[i]), pb = position(mesh, next);
      if (dist(pa, pb) <= dist(pa, pp) + dist(pp, pb)) {
        pts.erase(pts.begin() + i);
        changed = true;
        continue;
      }
    }
    ++i;
  }
  return changed;
}

bool movePass(const TriMesh& mesh, std::vector<SurfacePoint>& pts, bool closed) {
  bool changed = false;
  size_t i = closed ? 0 : 1;
  for (; i < pts.size(); ++i) {
    size_t n = pts.size();
    if (!closed && i + 1 >= n) break;
    const SurfacePoint& prev = pts[(i + n - 1) % n];
    const SurfacePoint& next = pts[(i + 1) % n];
    if (vertex_of(mesh, pts[i]) >= 0) {
      if (common_face(mesh, prev, next) >= 0) continue;  // removal handles
      if (auto rep = rerouteVertex(mesh, prev, pts[i], next)) {
        pts.erase(pts.begin() + i);
        pts.insert(pts.begin() + i, rep->begin(), rep->end());
        i += rep->size() - 1;
        changed = true;
      }
    } else if (edge_of(mesh, pts[i]) >= 0) {
      if (auto rep = slideEdgePoint(mesh, prev, pts[i], next)) {
        pts[i] = *rep;
        changed = true;
      }
    }
    // face-interior points are eliminated by the removal pass
  }
  return changed;
}

void straightenPoints(const TriMesh& mesh, std::vector<SurfacePoint>& pts, bool closed,
                      const StraightenParams& prm) {
  std::vector<SurfacePoint> input = pts;
  double inputLen = polyLen(mesh, pts, closed);
  double len = inputLen;
  for (int pass = 0; pass < prm.maxPasses; ++pass) {
    bool s = snapPass(mesh, pts);
    bool d = dedupePass(mesh, pts, closed);
    bool a = removalPass(mesh, pts, closed);
    bool fu = funnelPass(mesh, pts, closed);
    bool b = movePass(mesh, pts, closed);
    double next = polyLen(mesh, pts, closed);
    bool smallGain = len - next < prm.relTol * std::max(len, 1e-300);
    len = next;
    if (!s && !d && !a && !fu && !b) break;
    if (smallGain && pass > 0 && !s && !d) break;
  }
  // snapping can cost a few ulps; never hand back something longer
  if (len > inputLen) pts = std::move(input);
}

}  // namespace

Path straighten(const TriMesh& mesh, const Path& p, const StraightenParams& prm) {
  Path out = p;
  if (out.pts.size() < 3) return out;
  straightenPoints(mesh, out.pts, false, prm);
  return out;
}

ClosedCurve straighten(const TriMesh& mesh, const ClosedCurve& c, const StraightenParams& prm) {
  ClosedCurve out;
  out.pts = c.pts;
  straightenPoints(mesh, out.pts, true, prm);
  return out;
}

double interior_angle(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& p,
                      const SurfacePoint& b) {
  int v = vertex_of(mesh, p);
  if (v >= 0) {
    VertexFan fan = buildFan(mesh, v);
    double phiA = fanAngle(mesh, fan, a), phiB = fanAngle(mesh, fan, b);
    if (phiA < 0 || phiB < 0) return 0;
    double fwd = std::fmod(phiB - phiA + 2 * fan.total, fan.total);
    return std::min(fwd, fan.total - fwd);
  }
  int e = edge_of(mesh, p);
  if (e >= 0) {
    const TriMesh::Edge& ed = mesh.edge(e);
    int fBase = -1;
    for (int f : {ed.f0, ed.f1})
      if (pointOnFace(mesh, a, f)) fBase = f;
    if (fBase >= 0 && !pointOnFace(mesh, b, fBase)) {
      FaceChart cb = face_chart(mesh, fBase);
      Vec2 p2 = chart_point(cb, rebase(mesh, p, fBase));
      Vec2 a2 = chart_point(cb, rebase(mesh, a, fBase));
      Vec2 b2 = unfoldAcross(mesh, fBase, e, b);
      return angle2(a2 - p2, b2 - p2);
    }
  }
  Vec3 pp = position(mesh, p);
  return angle3(position(mesh, a) - pp, position(mesh, b) - pp);
}

Path geodesic_join(const TriMesh& mesh, const SurfacePoint& p, const SurfacePoint& q,
                   const std::vector<int>& corridor) {
  if (common_face(mesh, p, q) >= 0) {
    Path out;
    out.pts = {p, q};
    return out;
  }
  std::vector<char> inCorridor(mesh.faceCount(), corridor.empty() ? 1 : 0);
  for (int f : corridor)
    if (f >= 0 && f < mesh.faceCount()) inCorridor[f] = 1;

  // Dijkstra over edge midpoints restricted to corridor faces.
  int ne = mesh.edgeCount();
  const int kSrc = ne, kDst = ne + 1;
  std::vector<Vec3> pos(ne + 2);
  for (int e = 0; e < ne; ++e) {
    const TriMesh::Edge& ed = mesh.edge(e);
    pos[e] = (mesh.vertex(ed.v0) + mesh.vertex(ed.v1)) * 0.5;
  }
  pos[kSrc] = position(mesh, p);
  pos[kDst] = position(mesh, q);

  std::vector<double> distTo(ne + 2, 1e300);
  std::vector<int> from(ne + 2, -1);
  using QItem = std::pair<double, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  distTo[kSrc] = 0;
  pq.push({0, kSrc});

  std::set<int> dstFaces;
  for (int f : faces_of(mesh, q))
    if (inCorridor[f]) dstFaces.insert(f);

  auto relax = [&](int to, int via, double w) {
    if (distTo[via] + w < distTo[to]) {
      distTo[to] = distTo[via] + w;
      from[to] = via;
      pq.push({distTo[to], to});
    }
  };

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > distTo[u]) continue;
    if (u == kDst) break;
    if (u == kSrc) {
      for (int f : faces_of(mesh, p)) {
        if (!inCorridor[f]) continue;
        for (int s = 0; s < 3; ++s) relax(mesh.faceEdge(f, s), u, dist(pos[u], pos[mesh.faceEdge(f, s)]));
        if (dstFaces.count(f)) relax(kDst, u, dist(pos[u], pos[kDst]));
      }
      continue;
    }
    const TriMesh::Edge& ed = mesh.edge(u);
    for (int f : {ed.f0, ed.f1}) {
      if (!inCorridor[f]) continue;
      for (int s = 0; s < 3; ++s) {
        int e2 = mesh.faceEdge(f, s);
        if (e2 != u) relax(e2, u, dist(pos[u], pos[e2]));
      }
      if (dstFaces.count(f)) relax(kDst, u, dist(pos[u], pos[kDst]));
    }
  }
  if (distTo[kDst] >= 1e300) throw CorridorMiss("corridor does not connect the endpoints");

  std::vector<int> seq;
  for (int u = from[kDst]; u != kSrc; u = from[u]) seq.push_back(u);
  std::reverse(seq.begin(), seq.end());

  Path seed;
  seed.pts.push_back(p);
  for (int e : seq) seed.pts.push_back(make_edge_point(mesh, e, 0.5));
  seed.pts.push_back(q);
  return straighten(mesh, seed);
}

}  // namespace birkhoff
