#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define BIRKHOFF_DEFINE_ERROR(Name)                               \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

// mesh
BIRKHOFF_DEFINE_ERROR(ParseError);
BIRKHOFF_DEFINE_ERROR(TopologyError);
BIRKHOFF_DEFINE_ERROR(DegenerateFace);
BIRKHOFF_DEFINE_ERROR(SizeError);
BIRKHOFF_DEFINE_ERROR(NonPositiveAxis);
BIRKHOFF_DEFINE_ERROR(SelfIntersectionError);

// metric
BIRKHOFF_DEFINE_ERROR(EmptyRegion);
BIRKHOFF_DEFINE_ERROR(DegenerateLevel);
BIRKHOFF_DEFINE_ERROR(NoComponentNear);
BIRKHOFF_DEFINE_ERROR(WindowTooLarge);

// curves
BIRKHOFF_DEFINE_ERROR(NonGenericCrossing);
BIRKHOFF_DEFINE_ERROR(PathThroughCurve);
BIRKHOFF_DEFINE_ERROR(GapTooLarge);
BIRKHOFF_DEFINE_ERROR(PreconditionError);

// birkhoff
BIRKHOFF_DEFINE_ERROR(CorridorMiss);
BIRKHOFF_DEFINE_ERROR(NeverIntersects);
BIRKHOFF_DEFINE_ERROR(NeverSeparates);

// constructions
BIRKHOFF_DEFINE_ERROR(RotmanViolated);
BIRKHOFF_DEFINE_ERROR(SideTooThin);
BIRKHOFF_DEFINE_ERROR(BudgetExceeded);
BIRKHOFF_DEFINE_ERROR(FateUndecided);
BIRKHOFF_DEFINE_ERROR(ConstructionDegenerate);
BIRKHOFF_DEFINE_ERROR(ContinuityLost);
BIRKHOFF_DEFINE_ERROR(GenericityFailure);

// harness
BIRKHOFF_DEFINE_ERROR(NoGeodesicFound);
BIRKHOFF_DEFINE_ERROR(NoDistinctGeodesic);
BIRKHOFF_DEFINE_ERROR(RegionExtractionFailed);

#undef BIRKHOFF_DEFINE_ERROR

}  // namespace birkhoff
