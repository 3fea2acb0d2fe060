#pragma once

#include <stdexcept>
#include <string>

namespace trigfront {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define TRIGFRONT_ERROR(Name)            \
  struct Name : Error {                  \
    using Error::Error;                  \
  };

TRIGFRONT_ERROR(PreconditionError)
TRIGFRONT_ERROR(ValidationError)
TRIGFRONT_ERROR(RootSolveFailure)
TRIGFRONT_ERROR(NoConvergence)
TRIGFRONT_ERROR(DegenerateDoubleRoot)
TRIGFRONT_ERROR(BracketFailure)
TRIGFRONT_ERROR(TrackingAmbiguity)
TRIGFRONT_ERROR(ContinuationStall)
TRIGFRONT_ERROR(OnEssentialSpectrum)
TRIGFRONT_ERROR(EigenbasisIllConditioned)
TRIGFRONT_ERROR(ContourTooCoarse)
TRIGFRONT_ERROR(NotSimple)
TRIGFRONT_ERROR(NullVectorDegenerate)
TRIGFRONT_ERROR(GeometryMismatch)
TRIGFRONT_ERROR(EigensolverFailure)
TRIGFRONT_ERROR(NoEigenvalueNearSeed)
TRIGFRONT_ERROR(ResonantSolve)
TRIGFRONT_ERROR(NormalizationFitFailure)
TRIGFRONT_ERROR(BlowupDetected)
TRIGFRONT_ERROR(FrontRelaxationFailure)

#undef TRIGFRONT_ERROR

}  // namespace trigfront
