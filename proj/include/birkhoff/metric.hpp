#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "birkhoff/curve.hpp"

namespace birkhoff {

// Refined graph for geodesic distances: nodes are mesh vertices plus
// `perEdge` Steiner points per edge; edges are chords between all boundary
// samples of each face.
struct SteinerGraph {
  const TriMesh* mesh = nullptr;
  int perEdge = 3;
  std::vector<Vec3> pos;  // node positions (V vertex nodes, then E*perEdge)

  // CSR adjacency
  std::vector<int> adjStart;
  std::vector<int> adjNode;
  std::vector<double> adjLen;

  int nodeCount() const { return (int)pos.size(); }
  int steinerNode(int e, int j) const { return mesh->vertexCount() + e * perEdge + j; }
  SurfacePoint nodePoint(int n) const;
  // the 3 + 3*perEdge boundary sample nodes of face f
  std::vector<int> faceSamples(int f) const;
};

std::shared_ptr<const SteinerGraph> build_steiner_graph(const TriMesh& mesh, int perEdge = 3);

struct DistanceField {
  const TriMesh* mesh = nullptr;
  std::shared_ptr<const SteinerGraph> graph;
  std::vector<double> dist;  // per graph node

  std::optional<SurfacePoint> srcPoint;
  std::optional<ClosedCurve> srcCurve;

  double maxValue() const;
  double atVertex(int v) const { return dist[v]; }
  // field value at an arbitrary point (chord through the containing face)
  double at(const SurfacePoint& p) const;
};

DistanceField distance_field(const TriMesh& mesh, const SurfacePoint& src,
                             int steinerPerEdge = 3);
DistanceField distance_field(const TriMesh& mesh, const ClosedCurve& src,
                             int steinerPerEdge = 3);
DistanceField distance_field(std::shared_ptr<const SteinerGraph> graph, const SurfacePoint& src);
DistanceField distance_field(std::shared_ptr<const SteinerGraph> graph, const ClosedCurve& src);

// Sample of maximal field value; faceMask (per-face, optional) restricts the
// search to samples touching a masked face. Throws EmptyRegion.
std::pair<SurfacePoint, double> farthest_point(const DistanceField& field,
                                               const std::vector<char>& faceMask = {});

// Minimizing path on the refined graph, straightened.
Path shortest_path(const TriMesh& mesh, const SurfacePoint& p, const SurfacePoint& q,
                   int steinerPerEdge = 3);
Path shortest_path(const SteinerGraph& graph, const SurfacePoint& p, const SurfacePoint& q);

struct LevelCycle {
  ClosedCurve curve;
  double level = 0;
};

// All components of the r-level of the vertex-value interpolant, each a
// simple closed curve; r is jittered off sample values. Throws DegenerateLevel.
std::vector<LevelCycle> level_set(const DistanceField& field, double r);

// The cycle passing within tol of p. Throws NoComponentNear.
const LevelCycle& component_through(const std::vector<LevelCycle>& cycles, const TriMesh& mesh,
                                    const SurfacePoint& p, double tol);

struct CoareaResult {
  double u = 0;           // minimizing offset
  double lenA = 0, lenB = 0;
  bool budgetMet = false;
  bool clamped = false;   // window was clamped to 0.95*min(refA, refB)
};

// Scan u in [0, window], slicing fieldA at refA-u and fieldB at refB-u, for
// the minimum total slice length; reports whether it meets `budget`.
CoareaResult coarea_slice_search(const DistanceField& fieldA, const DistanceField& fieldB,
                                 double refA, double refB, double window, double budget,
                                 int samples);

// Area of the sublevel set {d <= r} of the vertex-value interpolant.
double ball_area(const DistanceField& field, double r);

// Flat binary dump: 8-byte magic "BKFIELD1", u64 node count, f64 values.
void dump_field(const DistanceField& field, std::ostream& os);

}  // namespace birkhoff
