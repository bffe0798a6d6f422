#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "birkhoff/birkhoff.hpp"
#include "birkhoff/constructions.hpp"

namespace birkhoff {

struct GeodesicRecord {
  ClosedCurve curve;
  double length = 0;
  double residual = 0;    // radians
  int selfCrossings = 0;  // -1 when the crossing test is non-generic
  std::string provenance;
};

struct SolverSettings {
  double geodesicTol = 0.03;
  double collapseTol = 0;  // 0 = solver default (3 * minEdge)
  int seeds = 4;
  int slices = 64;
  int steinerPerEdge = 2;
  uint64_t seed = 1;
};

// One row of the L1*L2 <= C*A table. A row is applicable when the matching
// theorem's hypotheses held for the classified case; the universal row
// (2^9 * 10^4, Theorem 2.2) is always applicable.
struct RatioRow {
  std::string name;
  double constant = 0;
  double ratio = 0;  // L1*L2 / (C*A)
  bool applicable = false;
  bool pass = false;
};

struct CheckRow {
  std::string name;
  double value = 0, bound = 0;
  bool pass = false;
};

struct Width1Result {
  double width = 0, bound = 0;  // bound = 1600 sqrt(A)
  bool pass = false;
};

struct VerificationReport {
  int schemaVersion = 1;
  std::string meshName;
  double area = 0;
  double L1 = 0, L2 = 0;
  CaseLabel label;
  GeodesicRecord g1, g2;
  double product = 0;  // L1 * L2
  std::vector<RatioRow> ratios;
  std::vector<CheckRow> checks;  // rotman, hausdorff, cover rejection, width1
  // winding_mod2 of each geodesic around the deepest point of every
  // complement region of gamma1 (the distinctness evidence).
  std::vector<int> windingSignature1, windingSignature2;
  SolverSettings settings;
  double seconds = 0;  // excluded from the determinism comparison
};

// Minimum-length geodesic over distance sweepouts from `seeds` farthest-point
// sources plus `seeds` shortened random loops. Optionally reports the min-max
// width of every source sweepout (reused by width1_check). Asserts the Rotman
// bound L1 <= 4 sqrt(2A).
GeodesicRecord find_shortest_geodesic(const TriMesh& mesh, int seeds,
                                      const SolverSettings& settings = {},
                                      std::vector<double>* sweepWidths = nullptr);

// Case dispatch by self-crossing count and complement-region depths. The
// paper thresholds (170 A/L1, 16 sqrt(2) A/L1) are recorded but never gate:
// at desk scale they are loose, so short/long sub-cases compare depths
// relatively (a region is short below half the deepest one).
CaseLabel classify_geodesic(const TriMesh& mesh, const GeodesicRecord& g1);

// Dispatch to the section-3 construction for the label; falls back to
// generic sweepout min-max when the construction fails or is degenerate.
GeodesicRecord find_second_geodesic(const TriMesh& mesh, const GeodesicRecord& g1,
                                    const CaseLabel& label, const SolverSettings& settings = {});

// Fills every ratio and check row. When `width` is null, width1_check runs
// internally.
VerificationReport verify_product(const TriMesh& mesh, const GeodesicRecord& g1,
                                  const GeodesicRecord& g2, const CaseLabel& label,
                                  const SolverSettings& settings = {},
                                  const Width1Result* width = nullptr);

// Min over >= `axes` sweepout axes of the min-max width, against 1600 sqrt(A).
Width1Result width1_check(const TriMesh& mesh, int axes = 4, int slices = 64);

// The whole pipeline; sweepout widths from the gamma1 search are reused for
// the width row.
VerificationReport run_verification(const TriMesh& mesh, const std::string& meshName,
                                    const SolverSettings& settings = {});

// UTF-8 JSON with stable key order; `includeTimings` off gives the
// determinism-comparable form.
std::string report_json(const VerificationReport& r, bool includeTimings = true);

const char* case_name(CaseKind k);

}  // namespace birkhoff
