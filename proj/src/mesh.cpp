#include "birkhoff/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

namespace birkhoff {

namespace {
constexpr double kPi = 3.14159265358979323846;

uint64_t edgeKey(int a, int b) {
  if (a > b) std::swap(a, b);
  return (uint64_t)a << 32 | (uint32_t)b;
}
}  // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces)
    : verts_(std::move(vertices)), faces_(std::move(faces)) {
  buildConnectivity();
  orient();
  buildConnectivity();  // edge face slots depend on final orientation
  validate();
}

void TriMesh::buildConnectivity() {
  edges_.clear();
  faceEdges_.assign(faces_.size(), {-1, -1, -1});
  vertexFaces_.assign(verts_.size(), {});

  std::unordered_map<uint64_t, int> edgeIndex;
  edgeIndex.reserve(faces_.size() * 2);

  for (int f = 0; f < (int)faces_.size(); ++f) {
    const auto& fv = faces_[f];
    for (int c = 0; c < 3; ++c) {
      int v = fv[c];
      if (v < 0 || v >= (int)verts_.size()) throw ParseError("face references invalid vertex");
      vertexFaces_[v].push_back(f);
    }
    if (fv[0] == fv[1] || fv[1] == fv[2] || fv[0] == fv[2])
      throw DegenerateFace("face with repeated vertex");
    for (int c = 0; c < 3; ++c) {
      int a = fv[(c + 1) % 3], b = fv[(c + 2) % 3];  // edge opposite corner c
      auto key = edgeKey(a, b);
      auto it = edgeIndex.find(key);
      int e;
      if (it == edgeIndex.end()) {
        e = (int)edges_.size();
        edgeIndex.emplace(key, e);
        Edge ed;
        ed.v0 = std::min(a, b);
        ed.v1 = std::max(a, b);
        ed.length = dist(verts_[a], verts_[b]);
        edges_.push_back(ed);
      } else {
        e = it->second;
      }
      Edge& ed = edges_[e];
      if (ed.f0 < 0) ed.f0 = f;
      else if (ed.f1 < 0) ed.f1 = f;
      else throw TopologyError("edge shared by more than two faces");
      faceEdges_[f][c] = e;
    }
  }
}

void TriMesh::orient() {
  // Flip faces so that each undirected edge is traversed once in each
  // direction; BFS over face adjacency.
  std::vector<int> state(faces_.size(), 0);  // 0 unvisited, 1 keep, 2 flipped
  auto directedIn = [&](int f, int a, int b) {
    const auto& fv = faces_[f];
    for (int c = 0; c < 3; ++c)
      if (fv[c] == a && fv[(c + 1) % 3] == b) return true;
    return false;
  };
  for (int seed = 0; seed < (int)faces_.size(); ++seed) {
    if (state[seed]) continue;
    state[seed] = 1;
    std::queue<int> q;
    q.push(seed);
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      for (int c = 0; c < 3; ++c) {
        int e = faceEdges_[f][c];
        const Edge& ed = edges_[e];
        int g = ed.f0 == f ? ed.f1 : ed.f0;
        if (g < 0) continue;
        int a = faces_[f][(c + 1) % 3], b = faces_[f][(c + 2) % 3];
        bool needFlip = directedIn(g, a, b);  // same direction twice => flip g
        if (!state[g]) {
          if (needFlip) {
            std::swap(faces_[g][1], faces_[g][2]);
            std::swap(faceEdges_[g][1], faceEdges_[g][2]);
          }
          state[g] = needFlip ? 2 : 1;
          q.push(g);
        } else if (needFlip) {
          throw TopologyError("surface is not orientable");
        }
      }
    }
  }
  // Make the orientation outward for embedded genus-0 meshes: signed volume
  // should be positive.
  double vol6 = 0;
  for (const auto& fv : faces_)
    vol6 += dot(verts_[fv[0]], cross(verts_[fv[1]], verts_[fv[2]]));
  if (vol6 < 0)
    for (auto& fv : faces_) std::swap(fv[1], fv[2]);
}

void TriMesh::validate() {
  if (faces_.empty()) throw TopologyError("empty mesh");
  for (const Edge& e : edges_) {
    if (e.f1 < 0) throw TopologyError("boundary edge (edge with one face)");
    if (!(e.length > 0) || !std::isfinite(e.length)) throw DegenerateFace("non-positive edge length");
  }
  int chi = vertexCount() - edgeCount() + faceCount();
  if (chi != 2) throw TopologyError("Euler characteristic " + std::to_string(chi) + ", expected 2");

  // connectedness over faces
  std::vector<char> seen(faces_.size(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int f = q.front();
    q.pop();
    for (int c = 0; c < 3; ++c) {
      int g = faceNeighbor(f, c);
      if (g >= 0 && !seen[g]) {
        seen[g] = 1;
        ++reached;
        q.push(g);
      }
    }
  }
  if (reached != faceCount()) throw TopologyError("surface is not connected");

  maxEdge_ = 0;
  minEdge_ = edges_[0].length;
  for (const Edge& e : edges_) {
    minEdge_ = std::min(minEdge_, e.length);
    maxEdge_ = std::max(maxEdge_, e.length);
  }

  area_ = 0;
  for (int f = 0; f < faceCount(); ++f) {
    double l0 = edges_[faceEdges_[f][0]].length;
    double l1 = edges_[faceEdges_[f][1]].length;
    double l2 = edges_[faceEdges_[f][2]].length;
    if (l0 + l1 <= l2 || l1 + l2 <= l0 || l0 + l2 <= l1)
      throw DegenerateFace("triangle inequality violated");
    double a = faceArea(f);
    if (a < 1e-12 * maxEdge_ * maxEdge_) throw DegenerateFace("zero-area triangle");
    area_ += a;
  }

  // diameter proxy: max pairwise distance over a coarse vertex sample
  int n = vertexCount();
  int stride = std::max(1, n / 256);
  diameter_ = maxEdge_;
  for (int i = 0; i < n; i += stride)
    for (int j = i + stride; j < n; j += stride)
      diameter_ = std::max(diameter_, dist(verts_[i], verts_[j]));
}

int TriMesh::faceNeighbor(int f, int c) const {
  const Edge& e = edges_[faceEdges_[f][c]];
  return e.f0 == f ? e.f1 : e.f0;
}

int TriMesh::edgeBetween(int va, int vb) const {
  for (int f : vertexFaces_[va]) {
    const auto& fv = faces_[f];
    for (int c = 0; c < 3; ++c) {
      const Edge& e = edges_[faceEdges_[f][c]];
      if ((e.v0 == va && e.v1 == vb) || (e.v0 == vb && e.v1 == va)) return faceEdges_[f][c];
    }
  }
  return -1;
}

double TriMesh::faceArea(int f) const {
  const auto& fv = faces_[f];
  return 0.5 * norm(cross(verts_[fv[1]] - verts_[fv[0]], verts_[fv[2]] - verts_[fv[0]]));
}

Vec3 TriMesh::faceNormal(int f) const {
  const auto& fv = faces_[f];
  return normalize(cross(verts_[fv[1]] - verts_[fv[0]], verts_[fv[2]] - verts_[fv[0]]));
}

int TriMesh::cornerOf(int f, int v) const {
  const auto& fv = faces_[f];
  for (int c = 0; c < 3; ++c)
    if (fv[c] == v) return c;
  return -1;
}

MeshDiagnostics diagnose(const TriMesh& mesh) {
  MeshDiagnostics d;
  d.eulerCharacteristic = mesh.vertexCount() - mesh.edgeCount() + mesh.faceCount();
  d.isClosed = true;    // enforced at construction
  d.isOriented = true;  // enforced at construction
  d.minEdge = mesh.minEdge();
  d.maxEdge = mesh.maxEdge();
  d.area = mesh.area();
  d.diameterEstimate = mesh.diameterEstimate();
  d.minAngle = kPi;
  for (int f = 0; f < mesh.faceCount(); ++f) {
    const auto& fv = mesh.face(f);
    for (int c = 0; c < 3; ++c) {
      Vec3 u = mesh.vertex(fv[(c + 1) % 3]) - mesh.vertex(fv[c]);
      Vec3 v = mesh.vertex(fv[(c + 2) % 3]) - mesh.vertex(fv[c]);
      double ang = std::atan2(norm(cross(u, v)), dot(u, v));
      d.minAngle = std::min(d.minAngle, ang);
    }
  }
  return d;
}

double mesh_area(const TriMesh& mesh) { return mesh.area(); }

// ---------------------------------------------------------------- loaders

namespace {

std::string nextDataLine(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return line;
  }
  return {};
}

TriMesh loadOff(std::istream& in) {
  std::string line = nextDataLine(in);
  if (line.find("OFF") == std::string::npos) throw ParseError("missing OFF header");
  line = nextDataLine(in);
  std::istringstream hs(line);
  long nv = 0, nf = 0, ne = 0;
  if (!(hs >> nv >> nf >> ne) || nv <= 0 || nf <= 0) throw ParseError("bad OFF counts");
  std::vector<Vec3> verts(nv);
  for (long i = 0; i < nv; ++i) {
    std::istringstream ls(nextDataLine(in));
    if (!(ls >> verts[i].x >> verts[i].y >> verts[i].z)) throw ParseError("bad OFF vertex");
  }
  std::vector<std::array<int, 3>> faces(nf);
  for (long i = 0; i < nf; ++i) {
    std::istringstream ls(nextDataLine(in));
    int k = 0;
    if (!(ls >> k)) throw ParseError("bad OFF face");
    if (k != 3) throw ParseError("only triangular faces supported");
    if (!(ls >> faces[i][0] >> faces[i][1] >> faces[i][2])) throw ParseError("bad OFF face indices");
  }
  return TriMesh(std::move(verts), std::move(faces));
}

TriMesh loadObj(std::istream& in) {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  while (std::getline(in, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z)) throw ParseError("bad OBJ vertex");
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // accept v, v/vt, v/vt/vn, v//vn
        idx.push_back(std::stoi(tok.substr(0, tok.find('/'))));
      }
      if (idx.size() != 3) throw ParseError("only triangular faces supported");
      std::array<int, 3> f{};
      for (int c = 0; c < 3; ++c) {
        int v = idx[c];
        f[c] = v > 0 ? v - 1 : (int)verts.size() + v;
      }
      faces.push_back(f);
    }
  }
  if (verts.empty() || faces.empty()) throw ParseError("OBJ without triangles");
  return TriMesh(std::move(verts), std::move(faces));
}

}  // namespace

TriMesh load_mesh(std::istream& in, MeshFormat format) {
  return format == MeshFormat::OFF ? loadOff(in) : loadObj(in);
}

TriMesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  auto dotPos = path.rfind('.');
  std::string ext = dotPos == std::string::npos ? "" : path.substr(dotPos + 1);
  for (char& c : ext) c = (char)std::tolower((unsigned char)c);
  if (ext == "obj") return load_mesh(in, MeshFormat::OBJ);
  return load_mesh(in, MeshFormat::OFF);
}

void write_off(const TriMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertexCount() << ' ' << mesh.faceCount() << ' ' << mesh.edgeCount() << '\n';
  out.precision(17);
  for (const Vec3& v : mesh.vertices()) out << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

// ---------------------------------------------------------------- generators

namespace {

struct RawMesh {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

RawMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.verts = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
             {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : m.verts) v = normalize(v);
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
             {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return m;
}

void subdivide(RawMesh& m) {
  std::map<uint64_t, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = edgeKey(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int idx = (int)m.verts.size();
    m.verts.push_back((m.verts[a] + m.verts[b]) * 0.5);
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> out;
  out.reserve(m.faces.size() * 4);
  for (const auto& f : m.faces) {
    int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
    out.push_back({f[0], a, c});
    out.push_back({f[1], b, a});
    out.push_back({f[2], c, b});
    out.push_back({a, b, c});
  }
  m.faces = std::move(out);
}

RawMesh unitIcosphere(int subdiv) {
  RawMesh m = icosahedron();
  for (int i = 0; i < subdiv; ++i) {
    subdivide(m);
    for (Vec3& v : m.verts) v = normalize(v);
  }
  return m;
}

}  // namespace

TriMesh generate_icosphere(int subdiv) {
  if (subdiv < 0 || subdiv > 8) throw SizeError("icosphere subdiv must be in [0, 8]");
  RawMesh m = unitIcosphere(subdiv);
  return TriMesh(std::move(m.verts), std::move(m.faces));
}

TriMesh generate_ellipsoid(double a, double b, double c, int subdiv) {
  if (subdiv < 0 || subdiv > 8) throw SizeError("ellipsoid subdiv must be in [0, 8]");
  if (!(a > 0) || !(b > 0) || !(c > 0)) throw NonPositiveAxis("axes must be positive");
  RawMesh m = unitIcosphere(subdiv);
  for (Vec3& v : m.verts) {
    v.x *= a;
    v.y *= b;
    v.z *= c;
  }
  return TriMesh(std::move(m.verts), std::move(m.faces));
}

TriMesh generate_capsule(double r, double h, int res) {
  if (!(r > 0) || h < 0) throw SizeError("capsule needs r > 0, h >= 0");
  if (res < 8 || res > 512) throw SizeError("capsule res must be in [8, 512]");
  int nseg = res;                                     // around the axis
  double step = 2 * kPi * r / nseg;                   // target edge length
  int ncyl = std::max(1, (int)std::lround(h / step)); // rings along the tube
  int ncap = std::max(2, (int)std::lround(kPi * r / 2 / step));

  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
  // rows of rings from bottom pole to top pole: bottom cap (excl pole),
  // cylinder, top cap (excl pole). Axis = z.
  std::vector<int> rowStart;
  auto addRing = [&](double radius, double z, double phase) {
    rowStart.push_back((int)verts.size());
    for (int i = 0; i < nseg; ++i) {
      double a = 2 * kPi * (i + phase) / nseg;
      verts.push_back({radius * std::cos(a), radius * std::sin(a), z});
    }
  };
  int bottomPole = (int)verts.size();
  verts.push_back({0, 0, -h / 2 - r});
  for (int i = 1; i <= ncap; ++i) {
    double t = kPi / 2 * i / ncap;  // polar angle from pole
    addRing(r * std::sin(t), -h / 2 - r * std::cos(t), 0.5 * i);
  }
  for (int i = 1; i < ncyl; ++i)
    addRing(r, -h / 2 + h * i / ncyl, 0.5 * (ncap + i));
  for (int i = ncap; i >= 1; --i) {
    double t = kPi / 2 * i / ncap;
    addRing(r * std::sin(t), h / 2 + r * std::cos(t), 0.5 * (ncap + ncyl + (ncap - i)));
  }
  int topPole = (int)verts.size();
  verts.push_back({0, 0, h / 2 + r});

  // fans at the poles
  int first = rowStart.front(), last = rowStart.back();
  for (int i = 0; i < nseg; ++i) {
    faces.push_back({bottomPole, first + (i + 1) % nseg, first + i});
    faces.push_back({topPole, last + i, last + (i + 1) % nseg});
  }
  // quads between consecutive rings
  for (size_t rI = 0; rI + 1 < rowStart.size(); ++rI) {
    int a = rowStart[rI], b = rowStart[rI + 1];
    for (int i = 0; i < nseg; ++i) {
      int i1 = (i + 1) % nseg;
      faces.push_back({a + i, a + i1, b + i});
      faces.push_back({a + i1, b + i1, b + i});
    }
  }
  return TriMesh(std::move(verts), std::move(faces));
}

// ------------------------------------------------------------- starfish

namespace {

// Signed distance of a capsule with linearly tapered radius.
double taperedCapsuleSdf(const Vec3& p, const Vec3& a, const Vec3& b, double ra, double rb) {
  Vec3 ab = b - a;
  double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
  return dist(p, a + ab * t) - (ra + (rb - ra) * t);
}

double smin(double d1, double d2, double k) {
  double h = std::clamp(0.5 + 0.5 * (d2 - d1) / k, 0.0, 1.0);
  return d2 + (d1 - d2) * h - k * h * (1.0 - h);
}

struct GridSampler {
  Vec3 lo;
  double cell;
  int nx, ny, nz;
  std::vector<double> vals;  // (nx+1)*(ny+1)*(nz+1)
  double at(int i, int j, int k) const {
    return vals[(size_t)(k * (ny + 1) + j) * (nx + 1) + i];
  }
  Vec3 pos(int i, int j, int k) const {
    return lo + Vec3{i * cell, j * cell, k * cell};
  }
};

// Marching tetrahedra over a regular grid; isolevel 0.
RawMesh marchingTets(const GridSampler& g) {
  RawMesh out;
  std::unordered_map<uint64_t, int> edgeVerts;
  auto nodeId = [&](int i, int j, int k) {
    return (uint64_t)((k * (g.ny + 1) + j) * (g.nx + 1) + i);
  };
  auto emitVertex = [&](uint64_t na, double va, const Vec3& pa, uint64_t nb, double vb,
                        const Vec3& pb) {
    uint64_t key = na > nb ? ((nb << 32) | (na & 0xffffffffULL)) : ((na << 32) | (nb & 0xffffffffULL));
    auto it = edgeVerts.find(key);
    if (it != edgeVerts.end()) return it->second;
    double t = va / (va - vb);
    t = std::clamp(t, 1e-4, 1.0 - 1e-4);
    int idx = (int)out.verts.size();
    out.verts.push_back(pa + (pb - pa) * t);
    edgeVerts.emplace(key, idx);
    return idx;
  };

  // Kuhn subdivision: 6 tets around the 0-6 diagonal, crack-free between cubes
  static const int tets[6][4] = {{0, 1, 2, 6}, {0, 1, 5, 6}, {0, 3, 2, 6},
                                 {0, 3, 7, 6}, {0, 4, 5, 6}, {0, 4, 7, 6}};
  // cube corner offsets
  static const int off[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double cv[8];
        Vec3 cp[8];
        uint64_t cn[8];
        bool allPos = true, allNeg = true;
        for (int c = 0; c < 8; ++c) {
          int ii = i + off[c][0], jj = j + off[c][1], kk = k + off[c][2];
          cv[c] = g.at(ii, jj, kk);
          cp[c] = g.pos(ii, jj, kk);
          cn[c] = nodeId(ii, jj, kk);
          (cv[c] < 0 ? allPos : allNeg) = false;
        }
        if (allPos || allNeg) continue;
        for (const auto& tet : tets) {
          int vi[4] = {tet[0], tet[1], tet[2], tet[3]};
          int inside[4], nIn = 0;
          for (int c = 0; c < 4; ++c)
            if (cv[vi[c]] < 0) inside[nIn++] = c;
          if (nIn == 0 || nIn == 4) continue;
          auto mid = [&](int a, int b) {
            return emitVertex(cn[vi[a]], cv[vi[a]], cp[vi[a]], cn[vi[b]], cv[vi[b]], cp[vi[b]]);
          };
          // orient by testing against the tet's inside/outside split later;
          // winding is repaired globally by TriMesh::orient().
          if (nIn == 1) {
            int a = inside[0];
            int b = (a + 1) % 4, c = (a + 2) % 4, d = (a + 3) % 4;
            out.faces.push_back({mid(a, b), mid(a, c), mid(a, d)});
          } else if (nIn == 3) {
            int a = 0;
            for (int c = 0; c < 4; ++c)
              if (cv[vi[c]] >= 0) a = c;
            int b = (a + 1) % 4, c = (a + 2) % 4, d = (a + 3) % 4;
            out.faces.push_back({mid(b, a), mid(c, a), mid(d, a)});
          } else {
            int a = inside[0], b = inside[1];
            int c = -1, d = -1;
            for (int m = 0; m < 4; ++m)
              if (m != a && m != b) (c < 0 ? c : d) = m;
            int ac = mid(a, c), ad = mid(a, d), bc = mid(b, c), bd = mid(b, d);
            out.faces.push_back({ac, ad, bd});
            out.faces.push_back({ac, bd, bc});
          }
        }
      }
  return out;
}

// Keep the largest face-connected component; drop degenerate triangles by
// collapsing nothing (marching tets with clamped t avoids exact duplicates).
RawMesh largestComponent(const RawMesh& m) {
  std::map<uint64_t, std::vector<int>> edgeFaces;
  for (int f = 0; f < (int)m.faces.size(); ++f)
    for (int c = 0; c < 3; ++c)
      edgeFaces[edgeKey(m.faces[f][c], m.faces[f][(c + 1) % 3])].push_back(f);
  std::vector<int> comp(m.faces.size(), -1);
  int ncomp = 0, bestComp = -1, bestSize = 0;
  for (int seed = 0; seed < (int)m.faces.size(); ++seed) {
    if (comp[seed] >= 0) continue;
    int size = 0;
    std::queue<int> q;
    q.push(seed);
    comp[seed] = ncomp;
    while (!q.empty()) {
      int f = q.front();
      q.pop();
      ++size;
      for (int c = 0; c < 3; ++c)
        for (int g : edgeFaces[edgeKey(m.faces[f][c], m.faces[f][(c + 1) % 3])])
          if (comp[g] < 0) {
            comp[g] = ncomp;
            q.push(g);
          }
    }
    if (size > bestSize) {
      bestSize = size;
      bestComp = ncomp;
    }
    ++ncomp;
  }
  RawMesh out;
  std::vector<int> remap(m.verts.size(), -1);
  for (int f = 0; f < (int)m.faces.size(); ++f) {
    if (comp[f] != bestComp) continue;
    std::array<int, 3> nf{};
    for (int c = 0; c < 3; ++c) {
      int v = m.faces[f][c];
      if (remap[v] < 0) {
        remap[v] = (int)out.verts.size();
        out.verts.push_back(m.verts[v]);
      }
      nf[c] = remap[v];
    }
    out.faces.push_back(nf);
  }
  return out;
}

}  // namespace

TriMesh generate_starfish(double legLen, double legRad, int res) {
  StarfishParams p;
  p.legLen = legLen;
  p.legRad = legRad;
  p.res = res;
  return generate_starfish(p);
}

TriMesh generate_starfish(const StarfishParams& p) {
  if (!(p.legRad > 0)) throw SizeError("legRad must be positive");
  if (p.res < 24 || p.res > 256) throw SizeError("starfish res must be in [24, 256]");
  double maxLen = p.legLen;
  for (double l : p.legLens)
    if (l > 0) maxLen = std::max(maxLen, l);
  for (int i = 0; i < 3; ++i) {
    double len = p.legLens[i] > 0 ? p.legLens[i] : p.legLen;
    if (!(len > 2 * p.legRad))
      throw SelfIntersectionError("legs too fat for the angle (need legLen > 2*legRad)");
  }

  std::array<Vec3, 3> dirs;
  for (int i = 0; i < 3; ++i) {
    double a = 2 * kPi * i / 3;
    dirs[i] = {std::cos(a), std::sin(a), 0};
  }
  // Legs start slightly off-center so the blended junction stays smooth; the
  // tapered radius (wider at the base) removes flat-tube plateaus so loops
  // around a single leg slide off over the tip.
  double start = 0.35 * p.legRad;
  double blend = 0.6 * p.legRad;
  auto sdf = [&](const Vec3& q) {
    double d = 1e30;
    for (int i = 0; i < 3; ++i) {
      double len = p.legLens[i] > 0 ? p.legLens[i] : p.legLen;
      Vec3 a = dirs[i] * start;
      Vec3 b = dirs[i] * (start + len - p.legRad);
      double di = taperedCapsuleSdf(q, a, b, p.legRad, p.legRad * (1.0 - p.taper));
      d = smin(d, di, blend);
    }
    return d;
  };

  double reach = start + maxLen + p.legRad;
  GridSampler g;
  g.lo = {-reach, -reach, -(p.legRad * 1.6 + blend)};
  Vec3 hi = {reach, reach, p.legRad * 1.6 + blend};
  g.cell = std::max({hi.x - g.lo.x, hi.y - g.lo.y, hi.z - g.lo.z}) / p.res;
  g.nx = (int)std::ceil((hi.x - g.lo.x) / g.cell);
  g.ny = (int)std::ceil((hi.y - g.lo.y) / g.cell);
  g.nz = (int)std::ceil((hi.z - g.lo.z) / g.cell);
  g.vals.resize((size_t)(g.nx + 1) * (g.ny + 1) * (g.nz + 1));
  for (int k = 0; k <= g.nz; ++k)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        g.vals[(size_t)(k * (g.ny + 1) + j) * (g.nx + 1) + i] = sdf(g.pos(i, j, k));

  RawMesh m = largestComponent(marchingTets(g));
  if (m.faces.empty()) throw SizeError("starfish extraction produced no surface");
  return TriMesh(std::move(m.verts), std::move(m.faces));
}

TriMesh generate_bumpy_sphere(int subdiv, double amplitude, uint64_t seed) {
  if (subdiv < 0 || subdiv > 8) throw SizeError("subdiv must be in [0, 8]");
  RawMesh m = unitIcosphere(subdiv);
  // Smooth radial noise from a handful of random spherical lobes.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec3> centers(8);
  std::vector<double> weights(8);
  for (size_t i = 0; i < centers.size(); ++i) {
    centers[i] = normalize(Vec3{u(rng), u(rng), u(rng)});
    weights[i] = u(rng);
  }
  for (Vec3& v : m.verts) {
    double r = 1;
    for (size_t i = 0; i < centers.size(); ++i) {
      double c = dot(v, centers[i]);
      r += amplitude * weights[i] * c * c * c;  // smooth low-frequency bump
    }
    v = v * r;
  }
  return TriMesh(std::move(m.verts), std::move(m.faces));
}

}  // namespace birkhoff
