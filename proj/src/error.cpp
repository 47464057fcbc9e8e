#include "hillbloch/error.hpp"

namespace hillbloch {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::NonHermitianInput: return "NonHermitianInput";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SymmetryViolation: return "SymmetryViolation";
        case ErrorCode::NonHermitianSample: return "NonHermitianSample";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::BoundaryContaminated: return "BoundaryContaminated";
        case ErrorCode::AccuracyFailure: return "AccuracyFailure";
        case ErrorCode::IndexTooSmall: return "IndexTooSmall";
        case ErrorCode::InvalidN: return "InvalidN";
        case ErrorCode::NonSimpleEigenvalue: return "NonSimpleEigenvalue";
        case ErrorCode::TInForbiddenSet: return "TInForbiddenSet";
        case ErrorCode::CutoffTooHigh: return "CutoffTooHigh";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace hillbloch
