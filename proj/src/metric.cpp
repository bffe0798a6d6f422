#include "birkhoff/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <ostream>
#include <queue>

#include "birkhoff/errors.hpp"
#include "birkhoff/straighten.hpp"

namespace birkhoff {

namespace {

double pointSegDist(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double d2 = norm2(ab);
  double t = d2 > 0 ? std::clamp(dot(p - a, ab) / d2, 0.0, 1.0) : 0.0;
  return dist(p, a + ab * t);
}

using Seed = std::pair<int, double>;

std::vector<double> dijkstra(const SteinerGraph& g, const std::vector<Seed>& seeds,
                             std::vector<int>* parent = nullptr) {
  int n = g.nodeCount();
  std::vector<double> d(n, 1e300);
  if (parent) parent->assign(n, -1);
  using QItem = std::pair<double, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  for (auto [s, w] : seeds) {
    if (w < d[s]) {
      d[s] = w;
      pq.push({w, s});
    }
  }
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (int k = g.adjStart[u]; k < g.adjStart[u + 1]; ++k) {
      int v = g.adjNode[k];
      double nd = du + g.adjLen[k];
      if (nd < d[v]) {
        d[v] = nd;
        if (parent) (*parent)[v] = u;
        pq.push({nd, v});
      }
    }
  }
  return d;
}

std::vector<Seed> pointSeeds(const SteinerGraph& g, const SurfacePoint& src) {
  const TriMesh& mesh = *g.mesh;
  Vec3 s3 = position(mesh, src);
  std::map<int, double> best;
  for (int f : faces_of(mesh, src))
    for (int n : g.faceSamples(f)) {
      double w = dist(g.pos[n], s3);
      auto it = best.find(n);
      if (it == best.end() || w < it->second) best[n] = w;
    }
  return {best.begin(), best.end()};
}

// faces each curve segment lies in, for exact chord seeding
std::map<int, std::vector<std::pair<Vec3, Vec3>>> curveSegmentsByFace(const TriMesh& mesh,
                                                                      const ClosedCurve& c) {
  std::map<int, std::vector<std::pair<Vec3, Vec3>>> out;
  size_t n = c.pts.size();
  for (size_t i = 0; i < n; ++i) {
    const SurfacePoint& a = c.pts[i];
    const SurfacePoint& b = c.pts[(i + 1) % n];
    int f = common_face(mesh, a, b);
    if (f >= 0) out[f].push_back({position(mesh, a), position(mesh, b)});
  }
  return out;
}

std::vector<Seed> curveSeeds(const SteinerGraph& g, const ClosedCurve& src) {
  const TriMesh& mesh = *g.mesh;
  auto byFace = curveSegmentsByFace(mesh, src);
  std::map<int, double> best;
  for (const auto& [f, segs] : byFace) {
    for (int n : g.faceSamples(f)) {
      double w = 1e300;
      for (const auto& [a, b] : segs) w = std::min(w, pointSegDist(g.pos[n], a, b));
      auto it = best.find(n);
      if (it == best.end() || w < it->second) best[n] = w;
    }
  }
  return {best.begin(), best.end()};
}

DistanceField makeField(std::shared_ptr<const SteinerGraph> graph, std::vector<Seed> seeds) {
  DistanceField f;
  f.mesh = graph->mesh;
  f.graph = std::move(graph);
  f.dist = dijkstra(*f.graph, seeds);
  return f;
}

}  // namespace

SurfacePoint SteinerGraph::nodePoint(int n) const {
  int nv = mesh->vertexCount();
  if (n < nv) return make_vertex_point(*mesh, n);
  int e = (n - nv) / perEdge, j = (n - nv) % perEdge;
  return make_edge_point(*mesh, e, double(j + 1) / (perEdge + 1));
}

std::vector<int> SteinerGraph::faceSamples(int f) const {
  std::vector<int> out;
  out.reserve(3 + 3 * perEdge);
  for (int c = 0; c < 3; ++c) out.push_back(mesh->face(f)[c]);
  for (int c = 0; c < 3; ++c) {
    int e = mesh->faceEdge(f, c);
    for (int j = 0; j < perEdge; ++j) out.push_back(steinerNode(e, j));
  }
  return out;
}

std::shared_ptr<const SteinerGraph> build_steiner_graph(const TriMesh& mesh, int perEdge) {
  if (perEdge < 0) throw PreconditionError("steinerPerEdge must be >= 0");
  auto g = std::make_shared<SteinerGraph>();
  g->mesh = &mesh;
  g->perEdge = perEdge;
  int nv = mesh.vertexCount();
  g->pos.resize(nv + mesh.edgeCount() * perEdge);
  for (int v = 0; v < nv; ++v) g->pos[v] = mesh.vertex(v);
  for (int e = 0; e < mesh.edgeCount(); ++e) {
    const TriMesh::Edge& ed = mesh.edge(e);
    for (int j = 0; j < perEdge; ++j) {
      double t = double(j + 1) / (perEdge + 1);
      g->pos[g->steinerNode(e, j)] = mesh.vertex(ed.v0) * (1 - t) + mesh.vertex(ed.v1) * t;
    }
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve((size_t)mesh.faceCount() * (3 + 3 * perEdge) * (2 + 3 * perEdge) / 2);
  for (int f = 0; f < mesh.faceCount(); ++f) {
    std::vector<int> s = g->faceSamples(f);
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j)
        pairs.push_back({std::min(s[i], s[j]), std::max(s[i], s[j])});
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  int n = g->nodeCount();
  std::vector<int> deg(n + 1, 0);
  for (auto [a, b] : pairs) {
    ++deg[a + 1];
    ++deg[b + 1];
  }
  for (int i = 0; i < n; ++i) deg[i + 1] += deg[i];
  g->adjStart = deg;
  g->adjNode.resize(pairs.size() * 2);
  g->adjLen.resize(pairs.size() * 2);
  std::vector<int> fill = g->adjStart;
  for (auto [a, b] : pairs) {
    double w = dist(g->pos[a], g->pos[b]);
    g->adjNode[fill[a]] = b;
    g->adjLen[fill[a]++] = w;
    g->adjNode[fill[b]] = a;
    g->adjLen[fill[b]++] = w;
  }
  return g;
}

double DistanceField::maxValue() const {
  double m = 0;
  for (double d : dist)
    if (d < 1e300) m = std::max(m, d);
  return m;
}

double DistanceField::at(const SurfacePoint& p) const {
  const TriMesh& m = *mesh;
  Vec3 p3 = position(m, p);
  double best = 1e300;
  for (int f : faces_of(m, p))
    for (int n : graph->faceSamples(f)) best = std::min(best, dist[n] + birkhoff::dist(graph->pos[n], p3));
  if (srcPoint && common_face(m, p, *srcPoint) >= 0)
    best = std::min(best, birkhoff::dist(p3, position(m, *srcPoint)));
  if (srcCurve) {
    auto byFace = curveSegmentsByFace(m, *srcCurve);
    for (int f : faces_of(m, p)) {
      auto it = byFace.find(f);
      if (it == byFace.end()) continue;
      for (const auto& [a, b] : it->second) best = std::min(best, pointSegDist(p3, a, b));
    }
  }
  return best;
}

DistanceField distance_field(std::shared_ptr<const SteinerGraph> graph, const SurfacePoint& src) {
  DistanceField f = makeField(graph, pointSeeds(*graph, src));
  f.srcPoint = src;
  return f;
}

DistanceField distance_field(std::shared_ptr<const SteinerGraph> graph, const ClosedCurve& src) {
  DistanceField f = makeField(graph, curveSeeds(*graph, src));
  f.srcCurve = src;
  return f;
}

DistanceField distance_field(const TriMesh& mesh, const SurfacePoint& src, int steinerPerEdge) {
  return distance_field(build_steiner_graph(mesh, steinerPerEdge), src);
}

DistanceField distance_field(const TriMesh& mesh, const ClosedCurve& src, int steinerPerEdge) {
  return distance_field(build_steiner_graph(mesh, steinerPerEdge), src);
}

std::pair<SurfacePoint, double> farthest_point(const DistanceField& field,
                                               const std::vector<char>& faceMask) {
  const TriMesh& mesh = *field.mesh;
  const SteinerGraph& g = *field.graph;
  auto allowed = [&](int n) {
    if (faceMask.empty()) return true;
    int nv = mesh.vertexCount();
    if (n < nv) {
      for (int f : mesh.vertexFaces(n))
        if (faceMask[f]) return true;
      return false;
    }
    int e = (n - nv) / g.perEdge;
    return faceMask[mesh.edge(e).f0] || faceMask[mesh.edge(e).f1];
  };
  int best = -1;
  double bd = -1;
  for (int n = 0; n < g.nodeCount(); ++n)
    if (field.dist[n] < 1e300 && field.dist[n] > bd && allowed(n)) {
      bd = field.dist[n];
      best = n;
    }
  if (best < 0) throw EmptyRegion("no samples in the requested region");
  return {g.nodePoint(best), bd};
}

Path shortest_path(const SteinerGraph& g, const SurfacePoint& p, const SurfacePoint& q) {
  const TriMesh& mesh = *g.mesh;
  if (common_face(mesh, p, q) >= 0) {
    Path out;
    out.pts = {p, q};
    return out;
  }
  std::vector<int> parent;
  std::vector<double> d = dijkstra(g, pointSeeds(g, p), &parent);
  Vec3 q3 = position(mesh, q);
  int bestEnd = -1;
  double bestLen = 1e300;
  for (int f : faces_of(mesh, q))
    for (int n : g.faceSamples(f)) {
      double w = d[n] + dist(g.pos[n], q3);
      if (w < bestLen) {
        bestLen = w;
        bestEnd = n;
      }
    }
  if (bestEnd < 0) throw NoGeodesicFound("endpoints not connected on the graph");
  std::vector<int> chain;
  for (int n = bestEnd; n >= 0; n = parent[n]) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());
  Path seed;
  seed.pts.push_back(p);
  for (int n : chain) seed.pts.push_back(g.nodePoint(n));
  seed.pts.push_back(q);
  return straighten(mesh, seed);
}

Path shortest_path(const TriMesh& mesh, const SurfacePoint& p, const SurfacePoint& q,
                   int steinerPerEdge) {
  return shortest_path(*build_steiner_graph(mesh, steinerPerEdge), p, q);
}

std::vector<LevelCycle> level_set(const DistanceField& field, double r) {
  const TriMesh& mesh = *field.mesh;
  double maxV = field.maxValue();
  if (!(r > 0) || !(r < maxV))
    throw PreconditionError("level value outside (0, max)");
  int nv = mesh.vertexCount();
  double scale = std::max(maxV, 1e-30);

  double rr = r;
  int tries = 0;
  for (; tries < 4; ++tries) {
    bool collides = false;
    for (int v = 0; v < nv; ++v)
      if (std::abs(field.dist[v] - rr) < 1e-12 * scale) {
        collides = true;
        break;
      }
    if (!collides) break;
    rr += 1e-7 * scale;
  }
  if (tries == 4) throw DegenerateLevel("level collides with sample values after jitter");

  auto crossT = [&](const TriMesh::Edge& ed) -> double {
    double a = field.dist[ed.v0] - rr, b = field.dist[ed.v1] - rr;
    if ((a > 0) == (b > 0)) return -1;
    return a / (a - b);
  };

  std::vector<char> visited(mesh.edgeCount(), 0);
  std::vector<LevelCycle> out;
  for (int e0 = 0; e0 < mesh.edgeCount(); ++e0) {
    if (visited[e0] || crossT(mesh.edge(e0)) < 0) continue;
    ClosedCurve c;
    int e = e0, from = mesh.edge(e0).f1;
    bool ok = true;
    do {
      visited[e] = 1;
      c.pts.push_back(make_edge_point(mesh, e, crossT(mesh.edge(e))));
      int f = mesh.edge(e).f0 == from ? mesh.edge(e).f1 : mesh.edge(e).f0;
      int next = -1;
      for (int s = 0; s < 3; ++s) {
        int ee = mesh.faceEdge(f, s);
        if (ee != e && crossT(mesh.edge(ee)) >= 0) {
          next = ee;
          break;
        }
      }
      if (next < 0) {
        ok = false;
        break;
      }
      from = f;
      e = next;
    } while (e != e0);
    if (!ok || c.pts.size() < 3) continue;
    out.push_back({std::move(c), rr});
  }
  std::sort(out.begin(), out.end(), [&](const LevelCycle& a, const LevelCycle& b) {
    return curve_length(mesh, a.curve) > curve_length(mesh, b.curve);
  });
  return out;
}

const LevelCycle& component_through(const std::vector<LevelCycle>& cycles, const TriMesh& mesh,
                                    const SurfacePoint& p, double tol) {
  Vec3 p3 = position(mesh, p);
  const LevelCycle* best = nullptr;
  double bd = 1e300;
  for (const LevelCycle& lc : cycles) {
    double d = distance_to_curve(mesh, p3, lc.curve);
    if (d < bd) {
      bd = d;
      best = &lc;
    }
  }
  if (!best || bd > tol) throw NoComponentNear("no level component within tolerance");
  return *best;
}

CoareaResult coarea_slice_search(const DistanceField& fieldA, const DistanceField& fieldB,
                                 double refA, double refB, double window, double budget,
                                 int samples) {
  if (samples < 2) throw PreconditionError("coarea_slice_search needs samples >= 2");
  const TriMesh& mesh = *fieldA.mesh;
  CoareaResult res;
  double w = window;
  double cap = 0.95 * std::min(refA, refB);
  if (w > cap) {
    w = cap;
    res.clamped = true;
  }
  double bestSum = 1e300;
  for (int i = 0; i < samples; ++i) {
    double u = w * i / (samples - 1);
    double la = 0, lb = 0;
    try {
      for (const LevelCycle& lc : level_set(fieldA, refA - u)) la += curve_length(mesh, lc.curve);
      for (const LevelCycle& lc : level_set(fieldB, refB - u)) lb += curve_length(mesh, lc.curve);
    } catch (const Error&) {
      continue;  // non-generic or out-of-range level; skip this sample
    }
    if (la + lb < bestSum) {
      bestSum = la + lb;
      res.u = u;
      res.lenA = la;
      res.lenB = lb;
    }
  }
  if (bestSum >= 1e300) throw DegenerateLevel("no valid slice in the window");
  res.budgetMet = bestSum <= budget;
  return res;
}

double ball_area(const DistanceField& field, double r) {
  const TriMesh& mesh = *field.mesh;
  double total = 0;
  for (int f = 0; f < mesh.faceCount(); ++f) {
    const auto& fv = mesh.face(f);
    double d[3] = {field.dist[fv[0]], field.dist[fv[1]], field.dist[fv[2]]};
    double area = mesh.faceArea(f);
    int below = (d[0] <= r) + (d[1] <= r) + (d[2] <= r);
    if (below == 0) continue;
    if (below == 3) {
      total += area;
      continue;
    }
    auto frac = [&](int i, int j) {  // cut fraction along corner i -> corner j
      double den = d[j] - d[i];
      return std::clamp(std::abs(den) < 1e-300 ? 0.5 : (r - d[i]) / den, 0.0, 1.0);
    };
    if (below == 1) {
      int i = d[0] <= r ? 0 : (d[1] <= r ? 1 : 2);
      total += area * frac(i, (i + 1) % 3) * frac(i, (i + 2) % 3);
    } else {
      int i = d[0] > r ? 0 : (d[1] > r ? 1 : 2);  // the corner above
      total += area * (1 - (1 - frac((i + 1) % 3, i)) * (1 - frac((i + 2) % 3, i)));
    }
  }
  return total;
}

void dump_field(const DistanceField& field, std::ostream& os) {
  const char magic[8] = {'B', 'K', 'F', 'I', 'E', 'L', 'D', '1'};
  os.write(magic, 8);
  std::uint64_t n = field.dist.size();
  os.write(reinterpret_cast<const char*>(&n), sizeof(n));
  os.write(reinterpret_cast<const char*>(field.dist.data()),
           (std::streamsize)(n * sizeof(double)));
}

}  // namespace birkhoff
