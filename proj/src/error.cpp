#include "fengshui/error.hpp"

namespace fengshui {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
        case ErrorCode::EmptyLog: return "EmptyLog";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::UnknownField: return "UnknownField";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::MalformedDocument: return "MalformedDocument";
        case ErrorCode::OutOfScale: return "OutOfScale";
        case ErrorCode::DefinitionMismatch: return "DefinitionMismatch";
        case ErrorCode::EmptyChannel: return "EmptyChannel";
        case ErrorCode::NonPositiveDimension: return "NonPositiveDimension";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::UnknownFeatureName: return "UnknownFeatureName";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooFewRows: return "TooFewRows";
        case ErrorCode::TooManyCandidates: return "TooManyCandidates";
        case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorCode::FeatureNameMismatch: return "FeatureNameMismatch";
        case ErrorCode::EmptyNode: return "EmptyNode";
        case ErrorCode::SingleClassDataset: return "SingleClassDataset";
        case ErrorCode::DuplicateSession: return "DuplicateSession";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::CorruptRow: return "CorruptRow";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::BadState: return "BadState";
        case ErrorCode::MalformedSample: return "MalformedSample";
        case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace fengshui
