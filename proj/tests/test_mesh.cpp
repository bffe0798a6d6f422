#include <cmath>
#include <iomanip>
#include <sstream>

#include "birkhoff/mesh.hpp"
#include "doctest.h"

using namespace birkhoff;

namespace {
constexpr double kPi = 3.14159265358979323846;

const char* kTetraOff =
    "OFF\n"
    "4 4 6\n"
    "1 1 1\n"
    "1 -1 -1\n"
    "-1 1 -1\n"
    "-1 -1 1\n"
    "3 0 1 2\n"
    "3 0 3 1\n"
    "3 0 2 3\n"
    "3 1 3 2\n";

// tetrahedron with one face missing -> boundary edges
const char* kOpenOff =
    "OFF\n"
    "4 3 6\n"
    "1 1 1\n"
    "1 -1 -1\n"
    "-1 1 -1\n"
    "-1 -1 1\n"
    "3 0 1 2\n"
    "3 0 3 1\n"
    "3 0 2 3\n";
}  // namespace

TEST_CASE("load_mesh: regular tetrahedron") {
  std::istringstream in(kTetraOff);
  TriMesh m = load_mesh(in, MeshFormat::OFF);
  CHECK(m.vertexCount() == 4);
  CHECK(m.edgeCount() == 6);
  CHECK(m.faceCount() == 4);
  CHECK(diagnose(m).eulerCharacteristic == 2);
  // edge length 2*sqrt(2): area = sqrt(3) * edge^2
  CHECK(m.area() == doctest::Approx(std::sqrt(3.0) * 8.0).epsilon(1e-12));
}

TEST_CASE("load_mesh: boundary edge rejected") {
  std::istringstream in(kOpenOff);
  CHECK_THROWS_AS(load_mesh(in, MeshFormat::OFF), TopologyError);
}

TEST_CASE("load_mesh: icosahedron area closed form") {
  std::ostringstream out;
  write_off(generate_icosphere(0), out);
  std::istringstream in(out.str());
  TriMesh m = load_mesh(in, MeshFormat::OFF);
  double a = 4.0 / std::sqrt(10.0 + 2.0 * std::sqrt(5.0));
  CHECK(m.area() == doctest::Approx(5.0 * std::sqrt(3.0) * a * a).epsilon(1e-9));
}

TEST_CASE("obj round trip") {
  std::ostringstream obj;
  TriMesh m = generate_icosphere(1);
  obj << std::setprecision(17);
  for (const auto& v : m.vertices()) obj << "v " << v.x << ' ' << v.y << ' ' << v.z << "\n";
  for (const auto& f : m.faces()) obj << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << "\n";
  std::istringstream in(obj.str());
  TriMesh m2 = load_mesh(in, MeshFormat::OBJ);
  CHECK(m2.faceCount() == m.faceCount());
  CHECK(m2.area() == doctest::Approx(m.area()).epsilon(1e-12));
}

TEST_CASE("icosphere counts and convergence") {
  CHECK(generate_icosphere(0).faceCount() == 20);
  CHECK(generate_icosphere(3).faceCount() == 1280);
  CHECK_THROWS_AS(generate_icosphere(9), SizeError);
  double prev = 1e9;
  for (int s : {2, 3, 4}) {
    double err = std::abs(generate_icosphere(s).area() - 4 * kPi);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(std::abs(generate_icosphere(4).area() - 4 * kPi) / (4 * kPi) < 0.002);
}

TEST_CASE("ellipsoid areas") {
  CHECK_THROWS_AS(generate_ellipsoid(1, 1, -2, 3), NonPositiveAxis);
  TriMesh round = generate_ellipsoid(1, 1, 1, 3);
  CHECK(round.area() == doctest::Approx(generate_icosphere(3).area()).epsilon(1e-12));

  auto prolateArea = [](double a, double c) {
    double e = std::sqrt(1 - a * a / (c * c));
    return 2 * kPi * a * a * (1 + c / (a * e) * std::asin(e));
  };
  CHECK(std::abs(generate_ellipsoid(1, 1, 1.5, 5).area() - prolateArea(1, 1.5)) /
            prolateArea(1, 1.5) <
        0.005);
  CHECK(std::abs(generate_ellipsoid(1, 1, 10, 5).area() - prolateArea(1, 10)) /
            prolateArea(1, 10) <
        0.01);
}

TEST_CASE("capsule") {
  TriMesh sphere = generate_capsule(1, 0, 48);
  CHECK(std::abs(sphere.area() - 4 * kPi) / (4 * kPi) < 0.01);
  TriMesh caps = generate_capsule(1, 10, 64);
  CHECK(diagnose(caps).eulerCharacteristic == 2);
  CHECK(std::abs(caps.area() - 24 * kPi) / (24 * kPi) < 0.005);
}

TEST_CASE("starfish topology") {
  CHECK_THROWS_AS(generate_starfish(8, 5, 64), SelfIntersectionError);
  TriMesh s = generate_starfish(8, 1, 48);
  CHECK(diagnose(s).eulerCharacteristic == 2);
  CHECK(s.area() > 0);
}

TEST_CASE("area invariance under reindexing and rigid motion") {
  TriMesh m = generate_icosphere(2);
  // rotate by an arbitrary rigid motion
  double c = std::cos(0.7), s = std::sin(0.7);
  std::vector<Vec3> verts;
  for (const Vec3& v : m.vertices())
    verts.push_back({c * v.x - s * v.y + 0.3, s * v.x + c * v.y - 1.2, v.z + 0.5});
  // reverse vertex order
  std::vector<Vec3> rev(verts.rbegin(), verts.rend());
  int n = (int)verts.size();
  std::vector<std::array<int, 3>> faces;
  for (const auto& f : m.faces()) faces.push_back({n - 1 - f[0], n - 1 - f[1], n - 1 - f[2]});
  TriMesh moved(rev, faces);
  CHECK(moved.area() == doctest::Approx(m.area()).epsilon(1e-10));
}

TEST_CASE("bumpy sphere valid") {
  TriMesh b = generate_bumpy_sphere(3, 0.2, 17);
  CHECK(diagnose(b).eulerCharacteristic == 2);
  CHECK(b.area() > 0);
}
