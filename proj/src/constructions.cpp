#include "birkhoff/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <random>

#include "birkhoff/crossings.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/straighten.hpp"

namespace birkhoff {

namespace {

const double kPi = 3.14159265358979323846;
const double kMeshSlack = 0.05;

double meanEdge(const TriMesh& mesh) {
  double sum = 0;
  for (int e = 0; e < mesh.edgeCount(); ++e) sum += mesh.edge(e).length;
  return sum / mesh.edgeCount();
}

ClosedCurve pointCurve(const SurfacePoint& p) {
  ClosedCurve c;
  c.pts = {p, p, p};
  return c;
}

bool isPointCurve(const TriMesh& mesh, const ClosedCurve& c, double tol) {
  return curve_length(mesh, c) < tol;
}

int nearestSample(const TriMesh& mesh, const std::vector<SurfacePoint>& pts, const Vec3& q) {
  int best = 0;
  double bd = 1e300;
  for (size_t i = 0; i < pts.size(); ++i) {
    double d = dist(position(mesh, pts[i]), q);
    if (d < bd) {
      bd = d;
      best = (int)i;
    }
  }
  return best;
}

ClosedCurve reversedCurve(const ClosedCurve& c) {
  ClosedCurve out;
  out.pts.assign(c.pts.rbegin(), c.pts.rend());
  return out;
}

ClosedCurve rotateTo(const ClosedCurve& c, int idx) {
  ClosedCurve out;
  int n = (int)c.size();
  out.pts.reserve(n);
  for (int i = 0; i < n; ++i) out.pts.push_back(c.pts[(idx + i) % n]);
  return out;
}

// Closed loop as a concatenate() fragment: starts and ends at pts[0].
CurveFragment loopFragment(const ClosedCurve& c) {
  CurveFragment f;
  f.pts = c.pts;
  f.pts.push_back(c.pts.front());
  return f;
}

std::vector<int> corridorAround(const TriMesh& mesh, const std::vector<int>& seeds, int rings) {
  std::vector<char> in(mesh.faceCount(), 0);
  std::deque<std::pair<int, int>> q;
  for (int f : seeds)
    if (!in[f]) {
      in[f] = 1;
      q.push_back({f, 0});
    }
  while (!q.empty()) {
    auto [f, d] = q.front();
    q.pop_front();
    if (d == rings) continue;
    for (int s = 0; s < 3; ++s) {
      int g = mesh.faceNeighbor(f, s);
      if (g >= 0 && !in[g]) {
        in[g] = 1;
        q.push_back({g, d + 1});
      }
    }
  }
  std::vector<int> out;
  for (int f = 0; f < mesh.faceCount(); ++f)
    if (in[f]) out.push_back(f);
  return out;
}

// Locally shortest connector between two nearby points, widening the search
// corridor on demand.
Path bridge(const TriMesh& mesh, const SurfacePoint& a, const SurfacePoint& b) {
  if (common_face(mesh, a, b) >= 0) {
    Path p;
    p.pts = {a, b};
    return p;
  }
  std::vector<int> seeds = faces_of(mesh, a);
  for (int f : faces_of(mesh, b)) seeds.push_back(f);
  for (int rings : {4, 16, 64}) {
    try {
      return geodesic_join(mesh, a, b, corridorAround(mesh, seeds, rings));
    } catch (const CorridorMiss&) {
    }
  }
  return geodesic_join(mesh, a, b);
}

std::vector<int> curveFaces(const TriMesh& mesh, const ClosedCurve& c) {
  std::vector<int> out;
  int n = (int)c.size();
  for (int i = 0; i < n; ++i) {
    for (int f : faces_of(mesh, c.pts[i])) out.push_back(f);
    int f = common_face(mesh, c.pts[i], c.pts[(i + 1) % n]);
    if (f >= 0) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Point of a path whose field value equals `target` (field grows along it).
SurfacePoint pointAtFieldValue(const TriMesh& mesh, const DistanceField& f, const Path& path,
                               double target) {
  for (size_t i = 0; i + 1 < path.pts.size(); ++i) {
    double a = f.at(path.pts[i]), b = f.at(path.pts[i + 1]);
    if ((a - target) * (b - target) <= 0 && a != b)
      return lerp_on_face(mesh, path.pts[i], path.pts[i + 1],
                          std::clamp((target - a) / (b - a), 0.0, 1.0));
  }
  return path.pts.back();
}

// Level component of the field at value r nearest to the given point.
ClosedCurve levelComponentNear(const TriMesh& mesh, const DistanceField& f, double r,
                               const SurfacePoint& near) {
  std::vector<LevelCycle> cycles = level_set(f, r);
  Vec3 q = position(mesh, near);
  const ClosedCurve* best = nullptr;
  double bd = 1e300;
  for (const LevelCycle& lc : cycles)
    for (const SurfacePoint& p : lc.curve.pts) {
      double d = dist(position(mesh, p), q);
      if (d < bd) {
        bd = d;
        best = &lc.curve;
      }
    }
  return *best;
}

double sliceHausdorff(const TriMesh& mesh, const ClosedCurve& a, const ClosedCurve& b) {
  return hausdorff_distance(mesh, a, b);
}

// A k-fold cover maps onto itself under a 1/k parameter shift. Densely
// sampled wraps of a small circle measure as geodesics (per-vertex turning
// scales with spacing), so covers of loops other than gamma1 have to be
// rejected geometrically, not by length multiples.
bool isSelfCover(const TriMesh& mesh, const ClosedCurve& c, int maxK) {
  size_t m = c.size();
  std::vector<Vec3> p(m);
  std::vector<double> cum(m + 1, 0);
  for (size_t i = 0; i < m; ++i) p[i] = position(mesh, c.pts[i]);
  for (size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + dist(p[i], p[(i + 1) % m]);
  double len = cum[m];
  if (!(len > 0)) return false;
  auto at = [&](double s) {
    s = std::fmod(s, len);
    size_t i = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin() - 1;
    i = std::min(i, m - 1);
    double seg = cum[i + 1] - cum[i];
    double t = seg > 0 ? (s - cum[i]) / seg : 0;
    return p[i] + (p[(i + 1) % m] - p[i]) * t;
  };
  const int samples = 256;
  for (int k = 2; k <= maxK; ++k) {
    double shift = len / k, tol = std::max(0.05 * len / k, 3 * mesh.minEdge());
    bool cover = true;
    for (int j = 0; j < samples && cover; ++j) {
      double s = len * j / samples;
      cover = dist(at(s), at(s + shift)) < tol;
    }
    if (cover) return true;
  }
  return false;
}

void appendSlice(const TriMesh& mesh, Sweepout& s, const ClosedCurve& c) {
  double len = curve_length(mesh, c);
  if (!s.slices.empty())
    s.continuityBound = std::max(s.continuityBound, sliceHausdorff(mesh, s.slices.back(), c));
  s.slices.push_back(c);
  s.maxLength = std::max(s.maxLength, len);
}

}  // namespace

int bracket_n(double A, double L1) {
  if (!(A > 0) || !(L1 > 0)) throw PreconditionError("bracket_n needs positive A and L1");
  double R = 4 * std::sqrt(2 * A);
  if (L1 > R * (1 + 1e-9)) throw RotmanViolated("L1 exceeds 4 sqrt(2A)");
  int n = (int)std::floor(R / std::min(L1, R) + 1e-12);
  while (n > 1 && !(L1 <= R / n)) --n;
  while (!(R / (n + 1) < L1)) ++n;
  return n;
}

long long covering_N(long long n) {
  if (n < 1) throw PreconditionError("covering_N needs n >= 1");
  return (n + 1) * (n + 1) / 8 + 2;
}

std::vector<std::vector<char>> complement_regions(const TriMesh& mesh, const ClosedCurve& c) {
  std::vector<char> boundary(mesh.faceCount(), 0);
  for (int f : curveFaces(mesh, c)) boundary[f] = 1;

  std::vector<std::vector<char>> regions;
  std::vector<char> seen = boundary;
  for (int f0 = 0; f0 < mesh.faceCount(); ++f0) {
    if (seen[f0]) continue;
    std::vector<char> mask(mesh.faceCount(), 0);
    std::deque<int> q = {f0};
    seen[f0] = 1;
    mask[f0] = 1;
    while (!q.empty()) {
      int f = q.front();
      q.pop_front();
      for (int s = 0; s < 3; ++s) {
        int g = mesh.faceNeighbor(f, s);
        if (g >= 0 && !seen[g]) {
          seen[g] = 1;
          mask[g] = 1;
          q.push_back(g);
        }
      }
    }
    regions.push_back(std::move(mask));
  }
  std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) {
    return std::count(a.begin(), a.end(), 1) > std::count(b.begin(), b.end(), 1);
  });
  return regions;
}

int region_of(const std::vector<std::vector<char>>& regions, const TriMesh& mesh,
              const SurfacePoint& p) {
  for (int f : faces_of(mesh, p))
    for (size_t r = 0; r < regions.size(); ++r)
      if (regions[r][f]) return (int)r;
  return -1;
}

Sweepout sweepout_from_distance(const TriMesh& mesh, const SurfacePoint& x, int slices,
                                int perEdge) {
  if (slices < 64) throw PreconditionError("sweepout_from_distance needs >= 64 slices");
  DistanceField f = distance_field(mesh, x, perEdge);
  auto [far, dmax] = farthest_point(f);

  Sweepout s;
  appendSlice(mesh, s, pointCurve(x));
  for (int i = 1; i + 1 < slices; ++i) {
    double r = dmax * i / (slices - 1);
    ClosedCurve slice;
    bool ok = false;
    for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
      try {
        std::vector<LevelCycle> ls = level_set(f, r);
        slice = ls.front().curve;  // largest component
        ok = true;
      } catch (const DegenerateLevel&) {
        r += 3e-3 * dmax / slices;
      }
    }
    if (!ok) throw DegenerateLevel("sweepout slice unrecoverable");
    appendSlice(mesh, s, slice);
  }
  appendSlice(mesh, s, pointCurve(far));
  return s;
}

MinmaxResult minmax_over_sweepout(const TriMesh& mesh, const Sweepout& s, int pullTightIters) {
  if (s.slices.size() < 3) throw PreconditionError("sweepout too small");
  double ptTol = 3 * mesh.minEdge();
  double bound = std::max(s.continuityBound * 1.5, 6 * mesh.minEdge());

  std::vector<ClosedCurve> fam = s.slices;
  auto famOk = [&]() {
    for (size_t i = 1; i < fam.size(); ++i)
      if (sliceHausdorff(mesh, fam[i - 1], fam[i]) > bound) return false;
    return true;
  };
  if (!famOk()) throw ContinuityLost("initial sweepout violates its continuity bound");

  auto maxLen = [&]() {
    double m = 0;
    for (const ClosedCurve& c : fam) m = std::max(m, curve_length(mesh, c));
    return m;
  };

  MinmaxResult res;
  res.width = maxLen();
  for (int it = 0; it < pullTightIters; ++it) {
    std::vector<ClosedCurve> next = fam;
    for (size_t i = 1; i + 1 < fam.size(); ++i) {
      double len = curve_length(mesh, fam[i]);
      if (len < ptTol) continue;
      int n = std::min(default_break_count(mesh, len), 256);
      next[i] = birkhoff_step(mesh, fam[i], n);
    }
    std::swap(fam, next);
    if (!famOk()) {
      std::swap(fam, next);  // keep the last valid family
      break;
    }
    res.iterations = it + 1;
  }
  res.width = std::min(res.width, maxLen());

  size_t crit = 0;
  double best = -1;
  for (size_t i = 0; i < fam.size(); ++i) {
    double len = curve_length(mesh, fam[i]);
    if (len > best) {
      best = len;
      crit = i;
    }
  }
  res.critical = fam[crit];
  BirkhoffParams prm;
  prm.maxIter = 1000;
  ShorteningOutcome refined = birkhoff_run(mesh, res.critical, prm);
  if (refined.kind == ShorteningOutcome::Geodesic) res.critical = refined.finalCurve;
  return res;
}

ClosedCurve perturb_offside(const TriMesh& mesh, const ClosedCurve& c,
                            const std::vector<char>& side, double eps, int perEdge) {
  if (eps < mesh.minEdge()) throw PreconditionError("perturb_offside: eps below mesh resolution");
  DistanceField f = distance_field(mesh, c, perEdge);
  std::vector<LevelCycle> cycles = level_set(f, eps / 2);

  const ClosedCurve* best = nullptr;
  double bestScore = 0;
  for (const LevelCycle& lc : cycles) {
    int inSide = 0;
    for (const SurfacePoint& p : lc.curve.pts) {
      for (int fc : faces_of(mesh, p))
        if (side[fc]) {
          ++inSide;
          break;
        }
    }
    double score = (double)inSide / (double)lc.curve.size();
    if (score > bestScore) {
      bestScore = score;
      best = &lc.curve;
    }
  }
  if (!best || bestScore < 0.5) throw SideTooThin("no offset level inside the region");
  return *best;
}

// ---------------------------------------------------------------------------
// Theorem 3.1: long sphere
// ---------------------------------------------------------------------------

namespace {

struct FateContext {
  const TriMesh* mesh;
  const DistanceField* fx;
  const DistanceField* fy;
  double lx, ly;  // ball radii of C0, C1
};

// 0 = iterate entered C0, 1 = C1, 2 = neither.
int curveRegion(const FateContext& ctx, const ClosedCurve& c) {
  bool in0 = true, in1 = true;
  for (const SurfacePoint& p : c.pts) {
    if (ctx.fx->at(p) >= ctx.lx) in0 = false;
    if (ctx.fy->at(p) >= ctx.ly) in1 = false;
    if (!in0 && !in1) return 2;
  }
  return in0 ? 0 : 1;
}

int pointRegion(const FateContext& ctx, const SurfacePoint& p) {
  if (ctx.fx->at(p) < ctx.lx) return 0;
  if (ctx.fy->at(p) < ctx.ly) return 1;
  return 2;
}

struct FateResult {
  int region = 2;
  ShorteningOutcome outcome;
};

// Probes run with a strict geodesic tolerance: the per-vertex angle residual
// shrinks with sampling density, so a densely sampled curved circle would
// otherwise pass for a geodesic and freeze the flow at iteration zero.
FateResult fateOf(const FateContext& ctx, const ClosedCurve& H, int maxIter, int maxN,
                  const std::function<void(const HomotopyTrace&)>& scanTrace) {
  BirkhoffParams prm;
  prm.maxIter = maxIter;
  prm.n = std::min(default_break_count(*ctx.mesh, curve_length(*ctx.mesh, H)), maxN);
  prm.geodesicTol = 1e-4;
  prm.recordTrace = true;
  FateResult out;
  out.outcome = birkhoff_run(*ctx.mesh, H, prm);
  if (out.outcome.kind == ShorteningOutcome::PointCollapse) {
    out.region = pointRegion(ctx, *out.outcome.collapsePoint);
  } else {
    // "some iterate entirely inside C_i"
    out.region = 2;
    for (const ClosedCurve& c : out.outcome.trace->curves) {
      int r = curveRegion(ctx, c);
      if (r != 2) {
        out.region = r;
        break;
      }
    }
  }
  if (scanTrace) scanTrace(*out.outcome.trace);
  out.outcome.trace.reset();
  return out;
}

}  // namespace

ShorteningOutcome long_sphere_candidate(const TriMesh& mesh, const ClosedCurve& gamma1,
                                        const SurfacePoint& x, const SurfacePoint& y,
                                        LongSphereLog* log) {
  double A = mesh.area();
  double L1 = curve_length(mesh, gamma1);
  int n = bracket_n(A, L1);
  long long N = covering_N(n);
  double budget = 2.0 * (double)N * L1;
  LongSphereLog local;
  LongSphereLog& lg = log ? *log : local;
  lg.n = n;
  lg.N = N;
  lg.L1 = L1;
  lg.budget = budget;

  auto graph = build_steiner_graph(mesh, 2);
  DistanceField fx = distance_field(graph, x);
  DistanceField fy = distance_field(graph, y);

  double refA = 1e300, refB = 1e300;
  for (const SurfacePoint& p : gamma1.pts) {
    refA = std::min(refA, fx.at(p));
    refB = std::min(refB, fy.at(p));
  }

  CoareaResult co = coarea_slice_search(fx, fy, refA, refB, 2 * A / L1, L1 / 2, 33);
  lg.coareaBudgetMet = co.budgetMet;
  double lx = refA - co.u, ly = refB - co.u;

  Path tau = shortest_path(*graph, x, y);
  Path tauRev;
  tauRev.pts.assign(tau.pts.rbegin(), tau.pts.rend());

  // Early exit: perturb gamma1 off to each side; a shortening run that lands
  // on a geodesic that is not a cover (length multiple) of gamma1 is already
  // the second geodesic.
  std::vector<std::vector<char>> regions = complement_regions(mesh, gamma1);
  int maxK = (int)(2 * N + 2);
  for (const SurfacePoint& tip : {x, y}) {
    int r = region_of(regions, mesh, tip);
    if (r < 0) continue;
    try {
      ClosedCurve off = perturb_offside(mesh, gamma1, regions[r], 3 * meanEdge(mesh));
      BirkhoffParams prm;
      prm.maxIter = 600;
      ShorteningOutcome run = birkhoff_run(mesh, off, prm);
      double runLen = curve_length(mesh, run.finalCurve);
      if (run.kind == ShorteningOutcome::Geodesic &&
          !length_multiple_of(L1, runLen, maxK) &&
          !isSelfCover(mesh, run.finalCurve, maxK) &&
          hausdorff_distance(mesh, gamma1, run.finalCurve) > 0.05 * std::min(L1, runLen)) {
        lg.earlyExit = true;
        return run;
      }
    } catch (const Error&) {
      // no usable offset on this side; continue with the covering family
    }
  }

  // Homotopy h_s from alpha0 to alpha1: level families of the two fields,
  // meeting near gamma1. Continuous in s and cached, so fate bisection never
  // hits a discretization wall.
  double margin = std::min(2 * mesh.minEdge(), 0.25 * std::min(refA - lx, refB - ly));
  std::map<uint64_t, ClosedCurve> stageCache;
  auto stageCurve = [&](double s) -> const ClosedCurve& {
    uint64_t key;
    static_assert(sizeof(key) == sizeof(s));
    std::memcpy(&key, &s, sizeof(key));
    auto it = stageCache.find(key);
    if (it != stageCache.end()) return it->second;
    ClosedCurve c;
    if (s <= 0.5) {
      double r = lx + (refA - margin - lx) * (2 * s);
      c = levelComponentNear(mesh, fx, r, pointAtFieldValue(mesh, fx, tau, r));
    } else {
      double r = (refB - margin) + (ly - (refB - margin)) * (2 * s - 1);
      c = levelComponentNear(mesh, fy, r, pointAtFieldValue(mesh, fy, tauRev, r));
    }
    // basepoint nearest the spine tau
    int bi = 0;
    double bd = 1e300;
    for (size_t i = 0; i < c.size(); ++i) {
      Vec3 q = position(mesh, c.pts[i]);
      double d = 1e300;
      for (size_t j = 0; j + 1 < tau.pts.size(); ++j) {
        Vec3 p0 = position(mesh, tau.pts[j]), p1 = position(mesh, tau.pts[j + 1]);
        Vec3 ab = p1 - p0, aq = q - p0;
        double dd = dot(ab, ab);
        double t = dd > 0 ? std::clamp(dot(aq, ab) / dd, 0.0, 1.0) : 0;
        d = std::min(d, dist(q, p0 + ab * t));
      }
      if (d < bd) {
        bd = d;
        bi = (int)i;
      }
    }
    ClosedCurve oriented = rotateTo(c, bi);
    // orient every stage the same way across tau, so H_t^N winds like an
    // N-fold cover instead of cancelling wrap against wrap
    bool flip = false;
    try {
      flip = oriented_intersection_number(mesh, oriented, tau) < 0;
    } catch (const Error&) {
      // stage grazes tau; fall back to the extrinsic circulation around the
      // x-y axis (marching orientation differs between the two fields)
      ++lg.orientFallbacks;
      Vec3 axis = position(mesh, x) - position(mesh, y);
      Vec3 circ{0, 0, 0};
      for (size_t i = 0; i < oriented.size(); ++i) {
        Vec3 p0 = position(mesh, oriented.pts[i]);
        Vec3 p1 = position(mesh, oriented.pts[(i + 1) % oriented.size()]);
        circ = circ + cross(p0, p1);
      }
      flip = dot(circ, axis) < 0;
    }
    if (flip) oriented = rotateTo(reversedCurve(oriented), (int)oriented.size() - 1);
    return stageCache.emplace(key, oriented).first->second;
  };

  // H_t^N: N loops staggered through the stages, chained along tau.
  auto buildCover = [&](double t) {
    std::vector<CurveFragment> frags;
    SurfacePoint firstStart, prevEnd;
    bool first = true;
    for (long long k = 0; k < N; ++k) {
      double sk = std::clamp((double)N * t - (double)k, 0.0, 1.0);
      const ClosedCurve& loop = stageCurve(sk);
      if (first)
        firstStart = loop.pts.front();
      else {
        Path b = bridge(mesh, prevEnd, loop.pts.front());
        if (b.size() >= 2) frags.push_back({b.pts, false});
      }
      frags.push_back(loopFragment(loop));
      prevEnd = loop.pts.front();
      first = false;
    }
    Path close = bridge(mesh, prevEnd, firstStart);
    if (close.size() >= 2) frags.push_back({close.pts, false});
    ClosedCurve H = concatenate(mesh, frags, 1e-6 * mesh.minEdge());
    double len = curve_length(mesh, H);
    lg.coverLengths.push_back(len);
    lg.maxCoverLength = std::max(lg.maxCoverLength, len);
    if (len >= budget * (1 + kMeshSlack)) throw BudgetExceeded("H_t^N slice over 2 N L1");
    return H;
  };

  FateContext ctx{&mesh, &fx, &fy, lx, ly};
  // Stricter than distinct_geodesics: demand both a non-multiple length and
  // Hausdorff separation, so sloppy near-copies of gamma1 (round sphere) and
  // translated rings of a degenerate waist family are rejected.
  auto accepted = [&](const ClosedCurve& c) {
    double len = curve_length(mesh, c);
    return !length_multiple_of(L1, len, maxK) && !isSelfCover(mesh, c, maxK) &&
           hausdorff_distance(mesh, gamma1, c) > 0.05 * std::min(L1, len);
  };

  // Near-critical trajectories hug the (unstable) saddle before falling off,
  // so the second geodesic appears mid-trace rather than as a final curve.
  // The best near-critical iterate is confirmed by local straightening:
  // greedy per-point moves cannot descend the saddle's coordinated unstable
  // directions, so a genuine saddle is a straighten fixed point, while
  // sampling-masked junk (slanted rings, cap wraps) straightens into a cover
  // or a collapse that the filters reject.
  std::optional<ShorteningOutcome> salvage;
  auto scanTrace = [&](const HomotopyTrace& trace) {
    const ClosedCurve* best = nullptr;
    double bestRes = 0.2;
    for (const ClosedCurve& c : trace.curves) {
      double len = curve_length(mesh, c);
      if (len < 3 * mesh.minEdge()) continue;
      double res = geodesic_residual(mesh, c);
      if (res >= bestRes || !accepted(c)) continue;
      if (res < lg.salvageBestResidual) {
        lg.salvageBestResidual = res;
        lg.salvageBestLength = len;
      }
      bestRes = res;
      best = &c;
    }
    if (salvage || !best) return;
    ClosedCurve tight = straighten(mesh, *best);
    if (geodesic_residual(mesh, tight) >= 1e-3 || !accepted(tight)) return;
    ShorteningOutcome hit;
    hit.kind = ShorteningOutcome::Geodesic;
    hit.finalCurve = tight;
    hit.residual = geodesic_residual(mesh, tight);
    salvage = std::move(hit);
  };

  auto fate = [&](double t, int iters, int maxN) {
    ++lg.fateProbes;
    FateResult r = fateOf(ctx, buildCover(t), iters, maxN, scanTrace);
    lg.probes.push_back({t, r.region, (int)r.outcome.kind,
                         curve_length(mesh, r.outcome.finalCurve)});
    return r;
  };

  FateResult f0 = fate(0, 500, 768), f1 = fate(1, 500, 768);
  if (salvage) return *salvage;
  if (f0.region == f1.region)
    throw FateUndecided("covering family endpoints share a fate");

  double a = 0, b = 1;
  int ra = f0.region;
  for (int depth = 0; depth < 40 && b - a > 1e-14; ++depth) {
    double mid = (a + b) / 2;
    FateResult fm = fate(mid, 500, 768);
    if (salvage) return *salvage;
    if (fm.region == 2) {
      // a cover of gamma1 or a stall: keep bisecting past it, on the side
      // the flow leans toward
      double mx = 0, my = 0;
      for (const SurfacePoint& p : fm.outcome.finalCurve.pts) {
        mx += fx.at(p);
        my += fy.at(p);
      }
      if (mx < my)
        (ra == 0 ? a : b) = mid;
      else
        (ra == 1 ? a : b) = mid;
    } else if (fm.region == ra) {
      a = mid;
    } else {
      b = mid;
    }
  }

  // Endgame: long, coarse runs at the converged interval. The coarser break
  // count speeds up transport along length plateaus, and the trace scan above
  // picks up the saddle pass.
  for (double t : {a, b}) {
    FateResult fr = fateOf(ctx, buildCover(t), 8000, 384, scanTrace);
    lg.probes.push_back({t, fr.region, (int)fr.outcome.kind,
                         curve_length(mesh, fr.outcome.finalCurve)});
    lg.stallFinals.push_back(fr.outcome.finalCurve);
    if (salvage) return *salvage;
    if (fr.outcome.kind == ShorteningOutcome::Geodesic && accepted(fr.outcome.finalCurve))
      return fr.outcome;
  }
  throw FateUndecided("fate bisection exhausted without a distinct geodesic");
}

// ---------------------------------------------------------------------------
// Theorem 3.2: starfish, all legs long
// ---------------------------------------------------------------------------

ShorteningOutcome starfish_long_candidate(const TriMesh& mesh, const ClosedCurve& gamma1,
                                          const SurfacePoint& x, const SurfacePoint& y,
                                          const SurfacePoint& z) {
  std::vector<Crossing> xs = self_intersections(mesh, gamma1);
  if (xs.size() != 1)
    throw PreconditionError("starfish_long_candidate needs a figure-eight gamma1");
  (void)y;

  double A = mesh.area();
  double L1 = curve_length(mesh, gamma1);
  double sigmaBudget = 16 * std::sqrt(2.0) * A / L1;

  auto graph = build_steiner_graph(mesh, 2);
  DistanceField fx = distance_field(graph, x);
  DistanceField fz = distance_field(graph, z);
  double dx = 1e300, dz = 1e300;
  for (const SurfacePoint& p : gamma1.pts) {
    dx = std::min(dx, fx.at(p));
    dz = std::min(dz, fz.at(p));
  }

  CoareaResult co = coarea_slice_search(fx, fz, dx, dz, L1 / (8 * std::sqrt(2.0)),
                                        8 * std::sqrt(2.0) * A / L1, 33);
  double rx = dx - co.u, rz = dz - co.u;

  Path tau = shortest_path(*graph, x, z);
  ClosedCurve sigma1 =
      levelComponentNear(mesh, fx, rx, pointAtFieldValue(mesh, fx, tau, rx));
  Path tauRev;
  tauRev.pts.assign(tau.pts.rbegin(), tau.pts.rend());
  ClosedCurve sigma2 =
      levelComponentNear(mesh, fz, rz, pointAtFieldValue(mesh, fz, tauRev, rz));

  // orient each loop so it crosses the spine with the same sign
  int o1 = oriented_intersection_number(mesh, sigma1, tau);
  int o2 = oriented_intersection_number(mesh, sigma2, tau);
  if (o1 == 0 || o2 == 0)
    throw ConstructionDegenerate("sigma loop does not cross the spine");
  bool flip1 = o1 < 0, flip2 = o2 < 0;

  SurfacePoint a1 = pointAtFieldValue(mesh, fx, tau, rx);
  SurfacePoint a2 = pointAtFieldValue(mesh, fz, tauRev, rz);
  ClosedCurve s1 = rotateTo(sigma1, nearestSample(mesh, sigma1.pts, position(mesh, a1)));
  ClosedCurve s2 = rotateTo(sigma2, nearestSample(mesh, sigma2.pts, position(mesh, a2)));

  std::vector<CurveFragment> frags;
  CurveFragment l1 = loopFragment(s1);
  l1.reversed = flip1;
  frags.push_back(l1);
  Path seg = bridge(mesh, s1.pts.front(), s2.pts.front());
  frags.push_back({seg.pts, false});
  CurveFragment l2 = loopFragment(s2);
  l2.reversed = flip2;
  frags.push_back(l2);
  frags.push_back({seg.pts, true});
  ClosedCurve sigma = concatenate(mesh, frags, 1e-6 * mesh.minEdge());

  if (curve_length(mesh, sigma) > sigmaBudget * (1 + kMeshSlack))
    throw BudgetExceeded("sigma exceeds 16 sqrt(2) A / L1");

  BirkhoffParams prm;
  prm.maxIter = 3000;
  prm.recordTrace = true;
  return birkhoff_run(mesh, sigma, prm);
}

// ---------------------------------------------------------------------------
// Theorem 3.3: short z leg — difference-field sweepout from x to y
// ---------------------------------------------------------------------------

Sweepout starfish_short_sweepout_z(const TriMesh& mesh, const ClosedCurve& gamma1,
                                   const SurfacePoint& x, const SurfacePoint& y,
                                   const SurfacePoint& z) {
  (void)gamma1;
  (void)z;
  auto graph = build_steiner_graph(mesh, 2);
  DistanceField fx = distance_field(graph, x);
  DistanceField fy = distance_field(graph, y);

  DistanceField diff = fx;
  double lo = 1e300;
  for (size_t i = 0; i < diff.dist.size(); ++i) {
    diff.dist[i] = fx.dist[i] - fy.dist[i];
    lo = std::min(lo, diff.dist[i]);
  }
  for (double& d : diff.dist) d -= lo;
  double hi = diff.maxValue();

  const int S = 64;
  Sweepout s;
  appendSlice(mesh, s, pointCurve(x));
  for (int i = 1; i + 1 < S; ++i) {
    double r = hi * i / (S - 1);
    r = std::clamp(r, hi * 1e-3, hi * (1 - 1e-3));
    ClosedCurve slice;
    bool ok = false;
    for (int attempt = 0; attempt < 3 && !ok; ++attempt) {
      try {
        slice = level_set(diff, r).front().curve;
        ok = true;
      } catch (const DegenerateLevel&) {
        r += 1e-3 * hi / S;
      }
    }
    if (!ok) throw DegenerateLevel("difference-field slice unrecoverable");
    appendSlice(mesh, s, slice);
  }
  appendSlice(mesh, s, pointCurve(y));
  return s;
}

// ---------------------------------------------------------------------------
// Theorem 3.4: short x/y leg
// ---------------------------------------------------------------------------

namespace {

// Level component lying (mostly) inside the face mask, nearest the target.
const ClosedCurve* sideComponentNear(const TriMesh& mesh, const std::vector<LevelCycle>& cycles,
                                     const std::vector<char>& mask, const Vec3& target) {
  const ClosedCurve* best = nullptr;
  double bd = 1e300;
  for (const LevelCycle& lc : cycles) {
    int inSide = 0;
    for (const SurfacePoint& p : lc.curve.pts)
      for (int f : faces_of(mesh, p))
        if (mask[f]) {
          ++inSide;
          break;
        }
    if (2 * inSide < (int)lc.curve.size()) continue;
    double d = 1e300;
    for (const SurfacePoint& p : lc.curve.pts) d = std::min(d, dist(position(mesh, p), target));
    if (d < bd) {
      bd = d;
      best = &lc.curve;
    }
  }
  return best;
}

// Vertex of the region's faces where the field is deepest.
SurfacePoint deepestInRegion(const TriMesh& mesh, const DistanceField& f,
                             const std::vector<char>& mask, double& depth) {
  int best = -1;
  depth = -1;
  for (int fc = 0; fc < mesh.faceCount(); ++fc) {
    if (!mask[fc]) continue;
    for (int c = 0; c < 3; ++c) {
      int vtx = mesh.face(fc)[c];
      if (f.atVertex(vtx) > depth) {
        depth = f.atVertex(vtx);
        best = vtx;
      }
    }
  }
  if (best < 0) throw RegionExtractionFailed("empty region");
  return make_vertex_point(mesh, best);
}

// Split a figure-eight at its self-intersection into its two lobes.
void splitLobes(const TriMesh& mesh, const ClosedCurve& g, ClosedCurve& lobeA,
                ClosedCurve& lobeB, SurfacePoint& v) {
  std::vector<Crossing> xs = self_intersections(mesh, g);
  if (xs.size() != 1) throw PreconditionError("curve is not a figure-eight");
  v = xs[0].at;
  int sa = xs[0].segA, sb = xs[0].segB;
  int n = (int)g.size();
  lobeA.pts = {v};
  for (int i = (sa + 1) % n; i != (sb + 1) % n; i = (i + 1) % n) lobeA.pts.push_back(g.pts[i]);
  lobeB.pts = {v};
  for (int i = (sb + 1) % n; i != (sa + 1) % n; i = (i + 1) % n) lobeB.pts.push_back(g.pts[i]);
}

// Truncate a path at a given arclength.
std::vector<SurfacePoint> pathPrefix(const TriMesh& mesh, const Path& p, double len) {
  std::vector<SurfacePoint> out = {p.pts.front()};
  double acc = 0;
  for (size_t i = 0; i + 1 < p.pts.size(); ++i) {
    double seg = dist(position(mesh, p.pts[i]), position(mesh, p.pts[i + 1]));
    if (acc + seg >= len) {
      double t = seg > 0 ? (len - acc) / seg : 0;
      out.push_back(lerp_on_face(mesh, p.pts[i], p.pts[i + 1], std::clamp(t, 0.0, 1.0)));
      return out;
    }
    out.push_back(p.pts[i + 1]);
    acc += seg;
  }
  return out;
}

ClosedCurve withTether(const TriMesh& mesh, const ClosedCurve& loopAtV,
                       const std::vector<SurfacePoint>& tether,
                       const std::vector<SurfacePoint>* endLoopPts) {
  std::vector<CurveFragment> frags;
  frags.push_back(loopFragment(loopAtV));
  if (tether.size() >= 2) frags.push_back({tether, false});
  if (endLoopPts && endLoopPts->size() >= 2) frags.push_back({*endLoopPts, false});
  if (tether.size() >= 2) frags.push_back({tether, true});
  return concatenate(mesh, frags, 1e-6 * mesh.minEdge());
}

}  // namespace

Sweepout starfish_short_sweepout_xy(const TriMesh& mesh, const ClosedCurve& gamma1,
                                    const SurfacePoint& x, const SurfacePoint& y,
                                    const SurfacePoint& z) {
  double A = mesh.area();
  double L1 = curve_length(mesh, gamma1);
  double tetherBudget = 16 * std::sqrt(2.0) * A / L1;
  double sweepBudget = 64 * std::sqrt(2.0) * A / L1;

  ClosedCurve lobeA, lobeB;
  SurfacePoint v;
  splitLobes(mesh, gamma1, lobeA, lobeB, v);

  DistanceField fx = distance_field(mesh, x, 2);
  auto minOn = [&](const DistanceField& f, const ClosedCurve& c) {
    double m = 1e300;
    for (const SurfacePoint& p : c.pts) m = std::min(m, f.at(p));
    return m;
  };
  const ClosedCurve& lobeX = minOn(fx, lobeA) < minOn(fx, lobeB) ? lobeA : lobeB;
  const ClosedCurve& lobeY = &lobeX == &lobeA ? lobeB : lobeA;

  std::vector<std::vector<char>> regions = complement_regions(mesh, gamma1);
  int rX = region_of(regions, mesh, x);
  int rY = region_of(regions, mesh, y);
  int rZ = region_of(regions, mesh, z);
  if (rX < 0 || rY < 0 || rZ < 0)
    throw RegionExtractionFailed("leg tip sits on the curve boundary");

  // collapse homotopies realized as level families of curve-distance fields
  DistanceField fLX = distance_field(mesh, lobeX, 2);
  DistanceField fLY = distance_field(mesh, lobeY, 2);
  DistanceField fG = distance_field(mesh, gamma1, 2);
  double depthX, depthY, depthZ;
  SurfacePoint px = deepestInRegion(mesh, fLX, regions[rX], depthX);
  SurfacePoint py = deepestInRegion(mesh, fLY, regions[rY], depthY);
  SurfacePoint pz = deepestInRegion(mesh, fG, regions[rZ], depthZ);

  const int S = 16;
  auto sideLevel = [&](const DistanceField& f, double r, const std::vector<char>& mask,
                       const SurfacePoint& target) {
    std::vector<LevelCycle> cycles = level_set(f, r);
    const ClosedCurve* c = sideComponentNear(mesh, cycles, mask, position(mesh, target));
    if (!c) throw ConstructionDegenerate("level family left its region");
    return *c;
  };

  Sweepout s;
  // 1. point at the bottom of the x region, opened back out to the x lobe
  appendSlice(mesh, s, pointCurve(px));
  for (int j = S; j >= 1; --j)
    appendSlice(mesh, s, sideLevel(fLX, depthX * j / (S + 1), regions[rX], px));
  appendSlice(mesh, s, lobeX);

  // 2. grow the doubled tether tau from the crossing v into the y region
  Path tau = bridge(mesh, v, py);
  double tauLen = curve_length(mesh, tau);
  if (tauLen > tetherBudget * (1 + kMeshSlack))
    throw BudgetExceeded("tether longer than 16 sqrt(2) A / L1");
  const int T = 8;
  for (int j = 1; j <= T; ++j)
    appendSlice(mesh, s, withTether(mesh, lobeX, pathPrefix(mesh, tau, tauLen * j / T), nullptr));

  // 3. open the tether end into the y lobe through its level family
  for (int j = S; j >= 0; --j) {
    double r = j == 0 ? 0 : depthY * j / (S + 1);
    ClosedCurve cy = j == 0 ? lobeY : sideLevel(fLY, r, regions[rY], py);
    ClosedCurve cyr = rotateTo(cy, nearestSample(mesh, cy.pts, position(mesh, tau.pts.back())));
    Path link = bridge(mesh, tau.pts.back(), cyr.pts.front());
    std::vector<SurfacePoint> teth = tau.pts;
    if (link.size() >= 2) teth.insert(teth.end(), link.pts.begin() + 1, link.pts.end());
    CurveFragment loop = loopFragment(cyr);
    appendSlice(mesh, s, withTether(mesh, lobeX, teth, &loop.pts));
  }

  // 4. retract the tether with both lobes hanging at v; the image equals the
  //    previous slice when the tether is full length, so the reattachment is
  //    a zero-distance move
  ClosedCurve lobeYatV = lobeY;
  for (int j = T; j >= 0; --j) {
    std::vector<SurfacePoint> teth = pathPrefix(mesh, tau, tauLen * j / T);
    std::vector<CurveFragment> frags;
    frags.push_back(loopFragment(lobeX));
    if (teth.size() >= 2) {
      frags.push_back({teth, false});
      frags.push_back({teth, true});
    }
    frags.push_back(loopFragment(lobeYatV));
    appendSlice(mesh, s, concatenate(mesh, frags, 1e-6 * mesh.minEdge()));
  }

  // 5. gamma1 itself, collapsed across the z region to its deepest point
  appendSlice(mesh, s, gamma1);
  for (int j = 1; j <= S; ++j)
    appendSlice(mesh, s, sideLevel(fG, depthZ * j / (S + 1), regions[rZ], pz));
  appendSlice(mesh, s, pointCurve(pz));

  if (s.maxLength > sweepBudget * (1 + kMeshSlack))
    throw BudgetExceeded("sweepout exceeds 64 sqrt(2) A / L1");
  return s;
}

// ---------------------------------------------------------------------------
// Mod-2 degree of a sweepout
// ---------------------------------------------------------------------------

namespace {

std::vector<Vec3> ringSamples(const TriMesh& mesh, const ClosedCurve& c, int m) {
  std::vector<Vec3> pos;
  for (const SurfacePoint& p : c.pts) pos.push_back(position(mesh, p));
  int n = (int)pos.size();
  std::vector<double> cum(n + 1, 0);
  for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + dist(pos[i], pos[(i + 1) % n]);
  double total = cum[n];
  std::vector<Vec3> out(m);
  if (total <= 0) {
    for (int j = 0; j < m; ++j) out[j] = pos[0];
    return out;
  }
  int seg = 0;
  for (int j = 0; j < m; ++j) {
    double target = total * j / m;
    while (seg + 1 <= n && cum[seg + 1] < target) ++seg;
    double segLen = cum[seg + 1] - cum[seg];
    double t = segLen > 0 ? (target - cum[seg]) / segLen : 0;
    out[j] = pos[seg % n] + (pos[(seg + 1) % n] - pos[seg % n]) * t;
  }
  return out;
}

// align ring b to ring a by cyclic offset and optional reversal
std::vector<Vec3> alignRing(const std::vector<Vec3>& a, std::vector<Vec3> b) {
  int m = (int)a.size();
  auto cost = [&](const std::vector<Vec3>& r, int off) {
    double c = 0;
    for (int j = 0; j < m; ++j) {
      Vec3 d = a[j] - r[(j + off) % m];
      c += dot(d, d);
    }
    return c;
  };
  std::vector<Vec3> rev(b.rbegin(), b.rend());
  double best = 1e300;
  int bestOff = 0;
  bool useRev = false;
  for (int off = 0; off < m; ++off) {
    double c = cost(b, off);
    if (c < best) {
      best = c;
      bestOff = off;
      useRev = false;
    }
    c = cost(rev, off);
    if (c < best) {
      best = c;
      bestOff = off;
      useRev = true;
    }
  }
  const std::vector<Vec3>& src = useRev ? rev : b;
  std::vector<Vec3> out(m);
  for (int j = 0; j < m; ++j) out[j] = src[(j + bestOff) % m];
  return out;
}

double solidAngle(const Vec3& o, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  Vec3 a = p1 - o, b = p2 - o, c = p3 - o;
  double la = norm(a), lb = norm(b), lc = norm(c);
  double num = dot(a, cross(b, c));
  double den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
  return 2 * std::atan2(num, den);
}

}  // namespace

bool noncontractibility_check(const TriMesh& mesh, const Sweepout& s) {
  if (s.slices.size() < 3) throw PreconditionError("sweepout too small");
  double ptTol = std::max(3 * mesh.minEdge(), 1e-9);
  if (!isPointCurve(mesh, s.slices.front(), ptTol) ||
      !isPointCurve(mesh, s.slices.back(), ptTol))
    throw PreconditionError("sweepout endpoints are not point curves");

  const int m = 64;
  std::vector<std::vector<Vec3>> rings;
  rings.push_back(ringSamples(mesh, s.slices.front(), m));
  for (size_t i = 1; i < s.slices.size(); ++i)
    rings.push_back(alignRing(rings.back(), ringSamples(mesh, s.slices[i], m)));

  Vec3 o{0, 0, 0};
  for (int vtx = 0; vtx < mesh.vertexCount(); ++vtx) o = o + mesh.vertex(vtx);
  o = o / (double)mesh.vertexCount();

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int attempt = 0; attempt < 5; ++attempt) {
    double total = 0;
    for (size_t i = 0; i + 1 < rings.size(); ++i) {
      const std::vector<Vec3>& a = rings[i];
      const std::vector<Vec3>& b = rings[i + 1];
      for (int j = 0; j < m; ++j) {
        int j1 = (j + 1) % m;
        total += solidAngle(o, a[j], a[j1], b[j1]);
        total += solidAngle(o, a[j], b[j1], b[j]);
      }
    }
    double w = total / (4 * kPi);
    if (std::abs(w - std::lround(w)) < 0.2) return std::lround(w) % 2 != 0;
    o = o + Vec3{u(rng), u(rng), u(rng)} * (0.1 * mesh.minEdge());
  }
  throw GenericityFailure("winding of the swept surface did not converge");
}

}  // namespace birkhoff
