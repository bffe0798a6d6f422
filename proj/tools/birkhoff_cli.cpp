#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "birkhoff/harness.hpp"
#include "json.hpp"

using namespace birkhoff;

namespace {

TriMesh loadMesh(const std::string& path) {
  if (path.empty()) throw ParseError("--mesh is required");
  return load_mesh_file(path);
}

void writePolyline(std::ostream& os, const TriMesh& mesh, const ClosedCurve& c, int& base) {
  for (const SurfacePoint& p : c.pts) {
    Vec3 q = position(mesh, p);
    os << "v " << q.x << " " << q.y << " " << q.z << "\n";
  }
  int n = (int)c.size();
  for (int i = 0; i < n; ++i) os << "l " << base + i << " " << base + (i + 1) % n << "\n";
  base += n;
}

std::ofstream openOut(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open output file " + path);
  return os;
}

struct Options {
  std::string mesh, out, shape = "icosphere", what = "gamma1";
  int subdiv = 4, res = 32, slices = 64, seeds = 4, steiner = 2;
  double ax = 1, ay = 1, az = 1.5, radius = 0.2, height = 10;
  double legLen = 8, legRad = 1, legLenZ = -1, amplitude = 0.1;
  double geodesicTol = 0.03, collapseTol = 0;
  uint64_t seed = 1;
  bool json = false;
};

SolverSettings settings(const Options& o) {
  SolverSettings st;
  st.geodesicTol = o.geodesicTol;
  st.collapseTol = o.collapseTol;
  st.seeds = o.seeds;
  st.slices = o.slices;
  st.steinerPerEdge = o.steiner;
  st.seed = o.seed;
  return st;
}

nlohmann::ordered_json recordJson(const GeodesicRecord& g) {
  return {{"length", g.length},
          {"residual", g.residual},
          {"selfCrossings", g.selfCrossings},
          {"provenance", g.provenance}};
}

int cmdGen(const Options& o) {
  TriMesh m = [&] {
    if (o.shape == "icosphere") return generate_icosphere(o.subdiv);
    if (o.shape == "ellipsoid") return generate_ellipsoid(o.ax, o.ay, o.az, o.subdiv);
    if (o.shape == "capsule") return generate_capsule(o.radius, o.height, o.res);
    if (o.shape == "bumpy") return generate_bumpy_sphere(o.subdiv, o.amplitude, o.seed);
    if (o.shape == "starfish") {
      StarfishParams sp;
      sp.legLen = o.legLen;
      sp.legRad = o.legRad;
      sp.res = o.res;
      if (o.legLenZ > 0) sp.legLens = {-1, -1, o.legLenZ};
      return generate_starfish(sp);
    }
    throw ParseError("unknown shape " + o.shape);
  }();
  std::ofstream os = openOut(o.out.empty() ? o.shape + ".off" : o.out);
  write_off(m, os);
  return 0;
}

int cmdCheck(const Options& o) {
  MeshDiagnostics d = diagnose(loadMesh(o.mesh));
  std::cout << "euler " << d.eulerCharacteristic << "\nclosed " << d.isClosed << "\noriented "
            << d.isOriented << "\narea " << d.area << "\nminEdge " << d.minEdge << "\nmaxEdge "
            << d.maxEdge << "\nminAngle " << d.minAngle << "\ndiameter " << d.diameterEstimate
            << "\n";
  return 0;
}

int cmdGeodesic(const Options& o) {
  TriMesh m = loadMesh(o.mesh);
  GeodesicRecord g = find_shortest_geodesic(m, o.seeds, settings(o));
  if (o.json)
    std::cout << recordJson(g).dump(2) << "\n";
  else
    std::cout << "L1 " << g.length << "\nresidual " << g.residual << "\nselfCrossings "
              << g.selfCrossings << "\nprovenance " << g.provenance << "\n";
  if (!o.out.empty()) {
    std::ofstream os = openOut(o.out);
    int base = 1;
    writePolyline(os, m, g.curve, base);
  }
  return 0;
}

int cmdSecond(const Options& o) {
  TriMesh m = loadMesh(o.mesh);
  SolverSettings st = settings(o);
  GeodesicRecord g1 = find_shortest_geodesic(m, o.seeds, st);
  CaseLabel label = classify_geodesic(m, g1);
  GeodesicRecord g2 = find_second_geodesic(m, g1, label, st);
  if (o.json) {
    nlohmann::ordered_json j = {{"case", case_name(label.kind)},
                                {"g1", recordJson(g1)},
                                {"g2", recordJson(g2)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "case " << case_name(label.kind) << "\nL1 " << g1.length << "\nL2 " << g2.length
              << "\n";
  }
  if (!o.out.empty()) {
    std::ofstream os = openOut(o.out);
    int base = 1;
    writePolyline(os, m, g1.curve, base);
    writePolyline(os, m, g2.curve, base);
  }
  return 0;
}

int cmdVerify(const Options& o) {
  TriMesh m = loadMesh(o.mesh);
  VerificationReport r = run_verification(m, o.mesh, settings(o));
  std::string j = report_json(r, true);
  if (!o.out.empty())
    openOut(o.out) << j << "\n";
  else
    std::cout << j << "\n";
  bool ok = true;
  for (const RatioRow& row : r.ratios)
    if (row.applicable && !row.pass) ok = false;
  for (const CheckRow& row : r.checks)
    if (!row.pass) ok = false;
  return ok ? 0 : 1;
}

int cmdWidth(const Options& o) {
  Width1Result w = width1_check(loadMesh(o.mesh), 4, o.slices);
  std::cout << "width1 " << w.width << "\nbound " << w.bound << "\npass " << w.pass << "\n";
  return w.pass ? 0 : 1;
}

int cmdExport(const Options& o) {
  TriMesh m = loadMesh(o.mesh);
  if (o.out.empty()) throw ParseError("--out is required for export");
  SolverSettings st = settings(o);
  if (o.what == "gamma1") {
    GeodesicRecord g = find_shortest_geodesic(m, o.seeds, st);
    std::ofstream os = openOut(o.out);
    int base = 1;
    writePolyline(os, m, g.curve, base);
  } else if (o.what == "sweepout") {
    auto graph = build_steiner_graph(m, st.steinerPerEdge);
    DistanceField f = distance_field(graph, make_vertex_point(m, 0));
    auto [far, d] = farthest_point(f);
    Sweepout sw = sweepout_from_distance(m, far, o.slices, st.steinerPerEdge);
    std::ofstream os = openOut(o.out);
    int base = 1;
    for (const ClosedCurve& c : sw.slices) writePolyline(os, m, c, base);
  } else if (o.what == "field") {
    DistanceField f = distance_field(m, make_vertex_point(m, 0), st.steinerPerEdge);
    std::ofstream os(o.out, std::ios::binary);
    if (!os) throw ParseError("cannot open output file " + o.out);
    dump_field(f, os);
  } else {
    throw ParseError("unknown export target " + o.what + " (gamma1|sweepout|field)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed geodesic pairs on triangulated 2-spheres"};
  app.require_subcommand(1);
  Options o;

  auto addCommon = [&](CLI::App* c, bool needsMesh) {
    if (needsMesh) c->add_option("--mesh", o.mesh, "input OFF/OBJ mesh");
    c->add_option("--out", o.out, "output file");
    c->add_option("--steiner", o.steiner, "Steiner points per edge");
    c->add_option("--geodesic-tol", o.geodesicTol, "geodesic angle tolerance (radians)");
    c->add_option("--collapse-tol", o.collapseTol, "point-collapse length tolerance");
    c->add_option("--seeds", o.seeds, "seed count for geodesic search");
    c->add_option("--slices", o.slices, "sweepout slice count");
    c->add_option("--seed", o.seed, "RNG seed");
    c->add_flag("--json", o.json, "JSON output");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a test mesh");
  gen->add_option("shape", o.shape, "icosphere|ellipsoid|capsule|starfish|bumpy");
  gen->add_option("--subdiv", o.subdiv, "icosphere subdivision");
  gen->add_option("--res", o.res, "capsule/starfish resolution");
  gen->add_option("--ax", o.ax, "ellipsoid x semi-axis");
  gen->add_option("--ay", o.ay, "ellipsoid y semi-axis");
  gen->add_option("--az", o.az, "ellipsoid z semi-axis");
  gen->add_option("--radius", o.radius, "capsule radius");
  gen->add_option("--height", o.height, "capsule cylinder height");
  gen->add_option("--leg-len", o.legLen, "starfish leg length");
  gen->add_option("--leg-rad", o.legRad, "starfish leg radius");
  gen->add_option("--leg-len-z", o.legLenZ, "starfish z-leg length override");
  gen->add_option("--amplitude", o.amplitude, "bumpy sphere noise amplitude");
  addCommon(gen, false);

  addCommon(app.add_subcommand("check", "print mesh diagnostics"), true);
  addCommon(app.add_subcommand("geodesic", "find the shortest closed geodesic"), true);
  addCommon(app.add_subcommand("second", "find a distinct second geodesic"), true);
  addCommon(app.add_subcommand("verify", "full pipeline with JSON report"), true);
  addCommon(app.add_subcommand("width", "1-parameter width estimate vs 1600 sqrt(A)"), true);
  CLI::App* exp = app.add_subcommand("export", "export curves, sweepouts, or fields");
  exp->add_option("--what", o.what, "gamma1|sweepout|field");
  addCommon(exp, true);

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmdGen(o);
    if (app.get_subcommand("check")->parsed()) return cmdCheck(o);
    if (app.get_subcommand("geodesic")->parsed()) return cmdGeodesic(o);
    if (app.get_subcommand("second")->parsed()) return cmdSecond(o);
    if (app.get_subcommand("verify")->parsed()) return cmdVerify(o);
    if (app.get_subcommand("width")->parsed()) return cmdWidth(o);
    if (exp->parsed()) return cmdExport(o);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
