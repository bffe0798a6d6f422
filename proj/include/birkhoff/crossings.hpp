#pragma once

#include <vector>

#include "birkhoff/curve.hpp"
#include "birkhoff/metric.hpp"

namespace birkhoff {

// One transverse crossing between two polyline segments.
struct Crossing {
  int segA = -1;  // segment index into the first operand
  int segB = -1;  // segment index into the second operand (or the same curve)
  SurfacePoint at;
  int sign = 0;  // orientation of (tangent A, tangent B) in the face chart
};

// All transverse self-crossings of c. Throws NonGenericCrossing when a
// tangential or overlapping configuration survives jittered retries (e.g. a
// doubly traversed curve).
std::vector<Crossing> self_intersections(const TriMesh& mesh, const ClosedCurve& c);

// All transverse crossings between two closed curves. Throws
// NonGenericCrossing.
std::vector<Crossing> curve_intersections(const TriMesh& mesh, const ClosedCurve& a,
                                          const ClosedCurve& b);

// Signed sum of crossings of c with p. Throws NonGenericCrossing.
int oriented_intersection_number(const TriMesh& mesh, const ClosedCurve& c, const Path& p);

// Mod-2 winding of c around p, measured by crossing parity along
// shortest_path(p, far); far must sit in the complement region of known
// winding 0. Throws PathThroughCurve when the witness path cannot be made
// transverse to c.
int winding_mod2(const SteinerGraph& graph, const ClosedCurve& c, const SurfacePoint& p,
                 const SurfacePoint& far);
int winding_mod2(const TriMesh& mesh, const ClosedCurve& c, const SurfacePoint& p,
                 const SurfacePoint& far, int perEdge = 3);

}  // namespace birkhoff
