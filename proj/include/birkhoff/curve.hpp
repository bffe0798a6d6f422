#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "birkhoff/mesh.hpp"

namespace birkhoff {

// A point on the mesh: face index + barycentric coordinates (order matches
// the face's corner order). Points on an edge or vertex carry zero
// coordinates and belong to every incident face.
struct SurfacePoint {
  int face = -1;
  std::array<double, 3> bary = {0, 0, 0};

  SurfacePoint() = default;
  SurfacePoint(int f, double b0, double b1, double b2) : face(f), bary{b0, b1, b2} {}
};

constexpr double kBaryEps = 1e-9;

SurfacePoint make_vertex_point(const TriMesh& mesh, int v);
// t measured from edge.v0 toward edge.v1.
SurfacePoint make_edge_point(const TriMesh& mesh, int e, double t);
SurfacePoint make_face_point(const TriMesh& mesh, int f, double b0, double b1, double b2);

Vec3 position(const TriMesh& mesh, const SurfacePoint& p);

// -1 if p is not on a vertex, else the vertex id.
int vertex_of(const TriMesh& mesh, const SurfacePoint& p);
// -1 if p is not on an edge interior, else the edge id (vertex points return -1).
int edge_of(const TriMesh& mesh, const SurfacePoint& p);
// All faces containing p (1 for interior, 2 for edge, the full fan for vertex).
std::vector<int> faces_of(const TriMesh& mesh, const SurfacePoint& p);
// Smallest-id face shared by both points, or -1.
int common_face(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& b);
// p re-expressed in face f (throws PreconditionError if p is not on f).
SurfacePoint rebase(const TriMesh& mesh, const SurfacePoint& p, int f);

// 2D chart of one face: origin at corner 0, x-axis along corner 0 -> corner 1.
struct FaceChart {
  std::array<Vec2, 3> corners;
};
FaceChart face_chart(const TriMesh& mesh, int f);
Vec2 chart_point(const FaceChart& chart, const SurfacePoint& p);

// Open polyline on the mesh. Consecutive points share a face; each segment is
// straight inside that face, so its length is the intrinsic one.
struct Path {
  std::vector<SurfacePoint> pts;

  bool empty() const { return pts.empty(); }
  size_t size() const { return pts.size(); }
};

// Cyclic polyline (pts.front() adjacent to pts.back(); the closing point is
// NOT duplicated). `breaks` optionally marks resample anchors.
struct ClosedCurve {
  std::vector<SurfacePoint> pts;
  std::vector<int> breaks;

  size_t size() const { return pts.size(); }
};

void check_valid(const TriMesh& mesh, const Path& p);
void check_valid(const TriMesh& mesh, const ClosedCurve& c);

double curve_length(const TriMesh& mesh, const Path& p);
double curve_length(const TriMesh& mesh, const ClosedCurve& c);

// Interpolate between two points sharing a face.
SurfacePoint lerp_on_face(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& b,
                          double t);

// n break points at equal arclength; original geometry is kept between breaks
// so the length is unchanged.
ClosedCurve resample(const TriMesh& mesh, const ClosedCurve& c, int n);

// Sub-polyline from break index bi to break index bj (cyclic, forward).
Path sub_polyline(const ClosedCurve& c, int bi, int bj);

struct CurveFragment {
  std::vector<SurfacePoint> pts;
  bool reversed = false;
};

// Join fragments end to end into a closed curve; consecutive endpoints must
// be within tol (3D) and are snapped.
ClosedCurve concatenate(const TriMesh& mesh, const std::vector<CurveFragment>& pieces, double tol);

double hausdorff_distance(const TriMesh& mesh, const ClosedCurve& a, const ClosedCurve& b);

// Min 3D distance from a point to the curve's segments.
double distance_to_curve(const TriMesh& mesh, const Vec3& p, const ClosedCurve& c);
double distance_to_curve(const TriMesh& mesh, const Vec3& p, const Path& c);

Vec3 centroid(const TriMesh& mesh, const ClosedCurve& c);

// Nearest point of the curve (among its samples) to a 3D position.
SurfacePoint nearest_curve_point(const TriMesh& mesh, const ClosedCurve& c, const Vec3& q);

// Distinctness test for geodesics: geometrically separated, or not a
// length-multiple (covering) of the shorter one.
bool distinct_geodesics(const TriMesh& mesh, const ClosedCurve& a, const ClosedCurve& b);
// Just the covering clause: |len(b) - k len(a)| <= 0.02 len(a) for some k <= maxK.
bool length_multiple_of(double lenA, double lenB, int maxK = 20);

}  // namespace birkhoff
