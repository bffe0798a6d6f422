#pragma once

#include <vector>

#include "birkhoff/birkhoff.hpp"
#include "birkhoff/curve.hpp"
#include "birkhoff/metric.hpp"

namespace birkhoff {

// One-parameter family of closed curves over [0,1]; endpoint slices are
// near-point curves for sweepouts of the whole sphere.
struct Sweepout {
  std::vector<ClosedCurve> slices;
  double maxLength = 0;
  double continuityBound = 0;  // max Hausdorff distance between neighbours
};

enum class CaseKind { LongSphere, StarfishAllLong, StarfishShortZ, StarfishShortXY, GeneralFallback };

// Which of the distance-threshold hypotheses held; thresholds are reported,
// never enforced. Depths are listed largest region first (dz < 0 when the
// complement has only two regions). The Morse-index assumption is recorded,
// not computed.
struct CaseLabel {
  CaseKind kind = CaseKind::GeneralFallback;
  double dx = -1, dy = -1, dz = -1;
  double longThreshold = 0;      // 170 A / L1
  double starfishThreshold = 0;  // 16 sqrt(2) A / L1
  bool indexAssumptionVerified = false;
};

// The unique n with 4 sqrt(2A)/(n+1) < L1 <= 4 sqrt(2A)/n.
// Throws RotmanViolated when L1 exceeds the Rotman bound 4 sqrt(2A).
int bracket_n(double A, double L1);

// N = floor((n+1)^2 / 8 + 2); always exceeds (n+1)^2/8 + 1.
long long covering_N(long long n);

// Connected components of the complement of c: per-region face masks
// (faces touched by c belong to no region), largest region first.
std::vector<std::vector<char>> complement_regions(const TriMesh& mesh, const ClosedCurve& c);
// Index of the region whose mask contains p's face, or -1 (on the boundary).
int region_of(const std::vector<std::vector<char>>& regions, const TriMesh& mesh,
              const SurfacePoint& p);

// Level-set sweepout of the distance field from x: slice t is the largest
// level cycle at t * d_max, with point-curve endpoints.
Sweepout sweepout_from_distance(const TriMesh& mesh, const SurfacePoint& x, int slices,
                                int perEdge = 3);

struct MinmaxResult {
  double width = 0;
  ClosedCurve critical;
  int iterations = 0;
};

// Pull-tight min-max: one Birkhoff step on every interior slice per
// iteration; stops when the continuity bound would break. The critical slice
// is refined by a full shortening run when it converges to a geodesic.
MinmaxResult minmax_over_sweepout(const TriMesh& mesh, const Sweepout& s, int pullTightIters);

// A closed curve at Hausdorff distance < eps from c, strictly inside the
// complement region `side` (a face mask). Throws SideTooThin.
ClosedCurve perturb_offside(const TriMesh& mesh, const ClosedCurve& c,
                            const std::vector<char>& side, double eps, int perEdge = 3);

// Diagnostics of the long-sphere pipeline: break/cover counts and every
// recorded covering-curve length against the 2 N L1 budget.
struct LongSphereLog {
  int n = 0;
  long long N = 0;
  double L1 = 0, budget = 0;
  bool coareaBudgetMet = false;
  std::vector<double> coverLengths;  // every H_t^N evaluated
  double maxCoverLength = 0;
  int fateProbes = 0;
  bool earlyExit = false;
  int orientFallbacks = 0;
  // best (lowest-residual) non-cover iterate seen across all probe traces
  double salvageBestResidual = 1e300;
  double salvageBestLength = 0;
  // final curves of the endgame runs, for post-mortem when fate is undecided
  std::vector<ClosedCurve> stallFinals;
  struct Probe {
    double t = 0;
    int region = -1;  // 0/1 ball fate, 2 neither
    int kind = -1;    // ShorteningOutcome::Kind of the probe run
    double finalLength = 0;
  };
  std::vector<Probe> probes;
};

// The Theorem 3.1 pipeline: coarea slices around x and y, collapse
// homotopies, the N-fold covering family H_t^N, and fate bisection to the
// min-max geodesic. Covers of gamma1 (length multiples) are rejected.
ShorteningOutcome long_sphere_candidate(const TriMesh& mesh, const ClosedCurve& gamma1,
                                        const SurfacePoint& x, const SurfacePoint& y,
                                        LongSphereLog* log = nullptr);

// Theorem 3.2: sigma = sigma1 U tau-segment U sigma2 U -tau-segment, oriented
// so its intersection number with the spine tau is 2, then shortened.
ShorteningOutcome starfish_long_candidate(const TriMesh& mesh, const ClosedCurve& gamma1,
                                          const SurfacePoint& x, const SurfacePoint& y,
                                          const SurfacePoint& z);

// Theorem 3.3: sweepout from x to y across the short leg z, realized as the
// level family of d(., x) - d(., y).
Sweepout starfish_short_sweepout_z(const TriMesh& mesh, const ClosedCurve& gamma1,
                                   const SurfacePoint& x, const SurfacePoint& y,
                                   const SurfacePoint& z);

// Theorem 3.4: collapse of the x-lobe, tether growth to the y-lobe, then a
// collapse of gamma1 through the z-region.
Sweepout starfish_short_sweepout_xy(const TriMesh& mesh, const ClosedCurve& gamma1,
                                    const SurfacePoint& x, const SurfacePoint& y,
                                    const SurfacePoint& z);

// Mod-2 degree of the swept sphere map (solid-angle winding of the swept
// surface around an interior point). Endpoint slices must be near-point
// curves. Throws GenericityFailure after retries.
bool noncontractibility_check(const TriMesh& mesh, const Sweepout& s);

}  // namespace birkhoff
