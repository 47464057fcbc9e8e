#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hillbloch {

enum class ErrorCode {
    NonSquare,
    NonHermitianInput,
    ConvergenceFailure,
    DimensionMismatch,
    SymmetryViolation,
    NonHermitianSample,
    InsufficientSamples,
    InvalidArgument,
    UnknownLabel,
    BoundaryContaminated,
    AccuracyFailure,
    IndexTooSmall,
    InvalidN,
    NonSimpleEigenvalue,
    TInForbiddenSet,
    CutoffTooHigh,
    ParseError,
};

std::string_view to_string(ErrorCode code);

// Every module reports failures through this exception; the code lets callers
// (and the CLI exit-code mapping) distinguish contract violations.
class SpectralError : public std::runtime_error {
public:
    SpectralError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hillbloch
