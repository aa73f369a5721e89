#pragma once

#include <stdexcept>
#include <string>

namespace fockparity {

// Base class for every error raised by the library. The CLI maps these to
// structured error entries; anything else is treated as an internal error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define FOCKPARITY_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                        \
    public:                                                            \
        using Error::Error;                                            \
        const char* kind() const noexcept override { return #Name; }   \
    };

FOCKPARITY_DEFINE_ERROR(DegenerateState)
FOCKPARITY_DEFINE_ERROR(DegenerateSuperposition)
FOCKPARITY_DEFINE_ERROR(NonRealOverlap)
FOCKPARITY_DEFINE_ERROR(TruncationTooSevere)
FOCKPARITY_DEFINE_ERROR(InvalidMode)
FOCKPARITY_DEFINE_ERROR(InvalidArgument)
FOCKPARITY_DEFINE_ERROR(CutoffOverflow)
FOCKPARITY_DEFINE_ERROR(ZeroProbabilityOutcome)
FOCKPARITY_DEFINE_ERROR(InvalidResource)

#undef FOCKPARITY_DEFINE_ERROR

}  // namespace fockparity
