#pragma once

#include <stdexcept>
#include <string>

namespace minkgeo {

/// Coarse failure classes; the CLI maps them to exit codes
/// (config -> 2, numeric -> 3, mismatch -> 4).
enum class ErrorClass { config, numeric, mismatch };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

#define MINKGEO_DEFINE_ERROR(Name, Class)                                   \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what)                              \
            : Error(ErrorClass::Class, std::string(#Name) + ": " + what) {} \
    }

MINKGEO_DEFINE_ERROR(InvalidParameter, config);
MINKGEO_DEFINE_ERROR(NonConvexProfile, config);
MINKGEO_DEFINE_ERROR(DegenerateNorm, numeric);
MINKGEO_DEFINE_ERROR(QuadratureFailure, numeric);
MINKGEO_DEFINE_ERROR(PhaseNotFound, numeric);
MINKGEO_DEFINE_ERROR(SingularFrame, numeric);
MINKGEO_DEFINE_ERROR(ScheduleTooCoarse, numeric);
MINKGEO_DEFINE_ERROR(LevelOutOfRange, numeric);
MINKGEO_DEFINE_ERROR(DegenerateRho, numeric);
MINKGEO_DEFINE_ERROR(BlowUp, numeric);
MINKGEO_DEFINE_ERROR(ResolutionError, numeric);
MINKGEO_DEFINE_ERROR(ReflectionAmbiguity, numeric);
MINKGEO_DEFINE_ERROR(ProfileInvariantViolation, numeric);
MINKGEO_DEFINE_ERROR(CurvatureMismatch, mismatch);

#undef MINKGEO_DEFINE_ERROR

} // namespace minkgeo
