#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/vec3.hpp"

namespace birkhoff {

// Closed orientable triangulated 2-sphere with the intrinsic (piecewise flat)
// metric induced by the vertex embedding. Immutable after construction.
class TriMesh {
 public:
  struct Edge {
    int v0 = -1, v1 = -1;  // v0 < v1
    int f0 = -1, f1 = -1;  // the two incident faces (closed surface)
    double length = 0;
  };

  TriMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

  int vertexCount() const { return (int)verts_.size(); }
  int faceCount() const { return (int)faces_.size(); }
  int edgeCount() const { return (int)edges_.size(); }

  const Vec3& vertex(int v) const { return verts_[v]; }
  const std::array<int, 3>& face(int f) const { return faces_[f]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Vec3>& vertices() const { return verts_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }

  // Edge id of face f opposite its corner c (i.e. between corners c+1, c+2).
  int faceEdge(int f, int c) const { return faceEdges_[f][c]; }
  // Neighbor face across faceEdge(f, c), or -1 never (closed surface).
  int faceNeighbor(int f, int c) const;
  // Edge between two vertices, or -1.
  int edgeBetween(int va, int vb) const;
  // Faces incident to vertex v, in no particular order.
  const std::vector<int>& vertexFaces(int v) const { return vertexFaces_[v]; }

  double faceArea(int f) const;
  Vec3 faceNormal(int f) const;
  double area() const { return area_; }
  double minEdge() const { return minEdge_; }
  double maxEdge() const { return maxEdge_; }
  // Cheap diameter proxy (max extrinsic pairwise distance over a vertex sample).
  double diameterEstimate() const { return diameter_; }

  // Index of corner c in face f whose vertex is v, or -1.
  int cornerOf(int f, int v) const;

 private:
  void buildConnectivity();
  void orient();
  void validate();

  std::vector<Vec3> verts_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> faceEdges_;
  std::vector<std::vector<int>> vertexFaces_;
  double area_ = 0, minEdge_ = 0, maxEdge_ = 0, diameter_ = 0;
};

struct MeshDiagnostics {
  int eulerCharacteristic = 0;
  bool isClosed = false;
  bool isOriented = false;
  double minAngle = 0;
  double minEdge = 0, maxEdge = 0;
  double area = 0;
  double diameterEstimate = 0;
};

MeshDiagnostics diagnose(const TriMesh& mesh);

enum class MeshFormat { OFF, OBJ };

TriMesh load_mesh(std::istream& in, MeshFormat format);
TriMesh load_mesh_file(const std::string& path);  // format from extension
void write_off(const TriMesh& mesh, std::ostream& out);

double mesh_area(const TriMesh& mesh);

TriMesh generate_icosphere(int subdiv);
TriMesh generate_ellipsoid(double a, double b, double c, int subdiv);
TriMesh generate_capsule(double r, double h, int res);

struct StarfishParams {
  double legLen = 8;
  double legRad = 1;
  int res = 64;
  // Per-leg length overrides (<= 0 means use legLen). Leg axes are 120 deg
  // apart in the xy-plane.
  std::array<double, 3> legLens = {-1, -1, -1};
  // Relative radius shrink from base to tip; keeps cross-sections within a
  // few percent of 2*pi*legRad while breaking the flat-tube plateau.
  double taper = 0.05;
};

TriMesh generate_starfish(double legLen, double legRad, int res);
TriMesh generate_starfish(const StarfishParams& params);

// Icosphere with smooth radial noise, for property sweeps.
TriMesh generate_bumpy_sphere(int subdiv, double amplitude, uint64_t seed);

}  // namespace birkhoff
