#pragma once

#include <stdexcept>
#include <string>

namespace ranklab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RANKLAB_DEFINE_ERROR(Name)                                            \
    struct Name : Error {                                                     \
        Name() : Error(#Name) {}                                              \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {}    \
    }

RANKLAB_DEFINE_ERROR(IndexOutOfAlphabet);
RANKLAB_DEFINE_ERROR(BallTooLarge);
RANKLAB_DEFINE_ERROR(DomainMismatch);
RANKLAB_DEFINE_ERROR(DomainNotField);
RANKLAB_DEFINE_ERROR(DivisionByZero);
RANKLAB_DEFINE_ERROR(PrimeDividesDenominator);
RANKLAB_DEFINE_ERROR(PrimeSearchExhausted);
RANKLAB_DEFINE_ERROR(RootIsolationFailed);
RANKLAB_DEFINE_ERROR(PointOutOfRange);
RANKLAB_DEFINE_ERROR(ProductTooLarge);
RANKLAB_DEFINE_ERROR(ClosureTooLarge);
RANKLAB_DEFINE_ERROR(BadPreset);
RANKLAB_DEFINE_ERROR(SupportExplosion);
RANKLAB_DEFINE_ERROR(DenominatorVanishes);
RANKLAB_DEFINE_ERROR(RepresentationInvalid);
RANKLAB_DEFINE_ERROR(DegreeCapExceeded);
RANKLAB_DEFINE_ERROR(ConfigError);

#undef RANKLAB_DEFINE_ERROR

// Parse failure with a byte offset into the offending text.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error("ParseError at " + std::to_string(pos) + ": " + msg), position(pos) {}
};

} // namespace ranklab
