#pragma once

#include <optional>
#include <vector>

#include "birkhoff/curve.hpp"
#include "birkhoff/metric.hpp"

namespace birkhoff {

// Discrete homotopy: every recorded curve of a shortening run, with lengths.
struct HomotopyTrace {
  std::vector<ClosedCurve> curves;
  std::vector<double> lengths;
};

struct ShorteningOutcome {
  enum Kind { Geodesic, PointCollapse, Stalled };
  Kind kind = Stalled;
  ClosedCurve finalCurve;
  std::optional<SurfacePoint> collapsePoint;  // set iff kind == PointCollapse
  double residual = 0;                        // max turning-angle defect, radians
  int iterations = 0;
  std::optional<HomotopyTrace> trace;
};

struct BirkhoffParams {
  int n = 0;                 // break count; 0 = resolution-matched automatic choice
  double geodesicTol = 0.03;  // radians
  double collapseTol = 0;     // 0 = 3 * minEdge
  int maxIter = 2000;
  bool recordTrace = false;
};

// Resolution-matched break count: arcs at most half the shortest edge.
int default_break_count(const TriMesh& mesh, double length);

// One Birkhoff step: two staggered half-steps, each replacing the arcs
// between consecutive break points (then between the arc midpoints) by
// locally shortest arcs. Never increases length.
ClosedCurve birkhoff_step(const TriMesh& mesh, const ClosedCurve& c, int n);

// Iterate birkhoff_step until the curve is a discrete closed geodesic, has
// collapsed to a point, or makes no further progress.
ShorteningOutcome birkhoff_run(const TriMesh& mesh, const ClosedCurve& c,
                               const BirkhoffParams& params = {});

// Max over curve points of |pi - interior angle| in the unfolded chart.
double geodesic_residual(const TriMesh& mesh, const ClosedCurve& c);
inline bool is_geodesic(const TriMesh& mesh, const ClosedCurve& c, double tol) {
  return geodesic_residual(mesh, c) <= tol;
}

// The last curve of the trace that still meets the given level cycle
// transversally. Throws NeverIntersects / NeverSeparates.
ClosedCurve track_last_intersection(const TriMesh& mesh, const HomotopyTrace& trace,
                                    const LevelCycle& cycle);

}  // namespace birkhoff
