#include "birkhoff/birkhoff.hpp"

#include <algorithm>
#include <cmath>

#include "birkhoff/crossings.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/straighten.hpp"

namespace birkhoff {

namespace {

const double kPi = 3.14159265358979323846;

double pathLength(const TriMesh& mesh, const std::vector<SurfacePoint>& pts) {
  double len = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    len += dist(position(mesh, pts[i]), position(mesh, pts[i + 1]));
  return len;
}

// Split an open polyline at its arclength midpoint; both halves include the
// inserted midpoint.
void splitAtMidpoint(const TriMesh& mesh, const std::vector<SurfacePoint>& pts,
                     std::vector<SurfacePoint>& first, std::vector<SurfacePoint>& second) {
  double half = pathLength(mesh, pts) / 2;
  double acc = 0;
  first.clear();
  second.clear();
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double seg = dist(position(mesh, pts[i]), position(mesh, pts[i + 1]));
    first.push_back(pts[i]);
    if (acc + seg >= half) {
      double t = seg > 0 ? (half - acc) / seg : 0;
      SurfacePoint m = lerp_on_face(mesh, pts[i], pts[i + 1], std::clamp(t, 0.0, 1.0));
      first.push_back(m);
      second.push_back(m);
      second.insert(second.end(), pts.begin() + i + 1, pts.end());
      return;
    }
    acc += seg;
  }
  // numerically fell off the end: split at the last interior point
  first = pts;
  second = {pts.back()};
}

// Straightened replacement for an arc, never longer than the original.
std::vector<SurfacePoint> replaceArc(const TriMesh& mesh, std::vector<SurfacePoint> pts) {
  if (pts.size() <= 2) return pts;
  Path arc;
  arc.pts = std::move(pts);
  double before = pathLength(mesh, arc.pts);
  Path out = straighten(mesh, arc, {40, 1e-12});
  return pathLength(mesh, out.pts) <= before ? std::move(out.pts) : std::move(arc.pts);
}

ClosedCurve assemble(const std::vector<std::vector<SurfacePoint>>& arcs) {
  ClosedCurve out;
  for (const std::vector<SurfacePoint>& arc : arcs) {
    out.breaks.push_back((int)out.pts.size());
    // the last point of each arc is the first point of the next one
    out.pts.insert(out.pts.end(), arc.begin(), arc.end() - 1);
  }
  return out;
}

}  // namespace

int default_break_count(const TriMesh& mesh, double length) {
  int n = (int)std::ceil(length / (0.5 * mesh.minEdge()));
  n = std::clamp(std::max(n, 32), 32, 4096);
  if (n % 2) ++n;
  return n;
}

ClosedCurve birkhoff_step(const TriMesh& mesh, const ClosedCurve& c, int n) {
  if (n < 4 || n % 2) throw PreconditionError("birkhoff_step needs even n >= 4");
  ClosedCurve r = resample(mesh, c, n);

  // first half-step: geodesic replacement between even break points
  std::vector<std::vector<SurfacePoint>> arcs(n / 2);
  for (int k = 0; k < n / 2; ++k)
    arcs[k] = replaceArc(mesh, sub_polyline(r, 2 * k, 2 * k + 2).pts);

  // second half-step: the same between the midpoints of the new arcs
  std::vector<std::vector<SurfacePoint>> firstHalf(n / 2), secondHalf(n / 2);
  for (int k = 0; k < n / 2; ++k)
    splitAtMidpoint(mesh, arcs[k], firstHalf[k], secondHalf[k]);
  std::vector<std::vector<SurfacePoint>> midArcs(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    std::vector<SurfacePoint> arc = secondHalf[k];
    const std::vector<SurfacePoint>& next = firstHalf[(k + 1) % (n / 2)];
    arc.insert(arc.end(), next.begin() + 1, next.end());
    midArcs[k] = replaceArc(mesh, std::move(arc));
  }
  return assemble(midArcs);
}

double geodesic_residual(const TriMesh& mesh, const ClosedCurve& c) {
  int n = (int)c.size();
  if (n < 3) return kPi;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const SurfacePoint& prev = c.pts[(i + n - 1) % n];
    const SurfacePoint& cur = c.pts[i];
    const SurfacePoint& next = c.pts[(i + 1) % n];
    double scale = 1e-12 * mesh.minEdge();
    if (dist(position(mesh, prev), position(mesh, cur)) < scale ||
        dist(position(mesh, next), position(mesh, cur)) < scale)
      continue;
    worst = std::max(worst, std::abs(kPi - interior_angle(mesh, prev, cur, next)));
  }
  return worst;
}

ShorteningOutcome birkhoff_run(const TriMesh& mesh, const ClosedCurve& c,
                               const BirkhoffParams& params) {
  double collapseTol = params.collapseTol > 0 ? params.collapseTol : 3 * mesh.minEdge();

  ShorteningOutcome out;
  if (params.recordTrace) out.trace = HomotopyTrace{};
  ClosedCurve cur = c;
  double stallRef = curve_length(mesh, cur);
  int stallAge = 0;

  for (int iter = 0; iter <= params.maxIter; ++iter) {
    double len = curve_length(mesh, cur);
    if (out.trace) {
      out.trace->curves.push_back(cur);
      out.trace->lengths.push_back(len);
    }
    out.iterations = iter;
    out.finalCurve = cur;

    if (len < collapseTol) {
      out.kind = ShorteningOutcome::PointCollapse;
      out.collapsePoint = nearest_curve_point(mesh, cur, centroid(mesh, cur));
      out.residual = 0;
      return out;
    }
    out.residual = geodesic_residual(mesh, cur);
    if (out.residual <= params.geodesicTol) {
      out.kind = ShorteningOutcome::Geodesic;
      return out;
    }
    if (iter == params.maxIter) break;

    // plateau detection over a 50-iteration window
    if (len > stallRef * (1 - 1e-10)) {
      if (++stallAge >= 50) break;
    } else {
      stallRef = len;
      stallAge = 0;
    }

    int n = params.n > 0 ? params.n : default_break_count(mesh, len);
    cur = birkhoff_step(mesh, cur, n);
  }
  out.kind = ShorteningOutcome::Stalled;
  return out;
}

ClosedCurve track_last_intersection(const TriMesh& mesh, const HomotopyTrace& trace,
                                    const LevelCycle& cycle) {
  if (trace.curves.empty()) throw PreconditionError("track_last_intersection: empty trace");
  // "intersects" is true when crossings exist, and conservatively also when
  // the configuration is tangential (the separating curve grazes the cycle)
  auto meets = [&](const ClosedCurve& cc) {
    if (cc.size() < 3) return false;
    try {
      return !curve_intersections(mesh, cc, cycle.curve).empty();
    } catch (const NonGenericCrossing&) {
      return true;
    }
  };
  if (!meets(trace.curves.front())) throw NeverIntersects("trace starts off the cycle");
  if (meets(trace.curves.back())) throw NeverSeparates("trace still meets the cycle at its end");
  for (size_t i = trace.curves.size() - 1; i > 0; --i)
    if (meets(trace.curves[i - 1])) return trace.curves[i - 1];
  return trace.curves.front();
}

}  // namespace birkhoff
