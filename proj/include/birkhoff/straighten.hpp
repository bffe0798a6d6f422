#pragma once

#include <vector>

#include "birkhoff/curve.hpp"

namespace birkhoff {

struct StraightenParams {
  int maxPasses = 200;
  double relTol = 1e-12;  // stop when a full pass improves length by less
};

// Local length-decreasing straightening. Points slide along their edges (via
// two-face unfolding), vertex points reroute through the thinner cone wedge,
// and redundant points are removed. Every accepted move strictly shortens the
// 3D polyline, so the length is monotone. Endpoints of a Path stay fixed.
Path straighten(const TriMesh& mesh, const Path& p, const StraightenParams& prm = {});
ClosedCurve straighten(const TriMesh& mesh, const ClosedCurve& c, const StraightenParams& prm = {});

// Surface angle at p between the segments p->a and p->b, measured after
// unfolding the traversed faces. Vertex points report the smaller wedge of the
// cone; everything else is the plain unfolded angle in [0, pi].
double interior_angle(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& p,
                      const SurfacePoint& b);

// Locally shortest path from p to q seeded through the given face corridor
// (empty corridor = whole mesh). Throws CorridorMiss when the corridor does
// not connect p to q.
Path geodesic_join(const TriMesh& mesh, const SurfacePoint& p, const SurfacePoint& q,
                   const std::vector<int>& corridor = {});

}  // namespace birkhoff
