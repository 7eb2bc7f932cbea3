#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fengshui {

enum class ErrorCode {
    MalformedRow,
    NonMonotonicTimestamp,
    EmptyLog,
    MissingField,
    UnknownField,
    OutOfRange,
    MalformedDocument,
    OutOfScale,
    DefinitionMismatch,
    EmptyChannel,
    NonPositiveDimension,
    InvalidConfig,
    UnknownFeatureName,
    ZeroVariance,
    LengthMismatch,
    TooFewRows,
    TooManyCandidates,
    EmptyTrainingSet,
    FeatureNameMismatch,
    EmptyNode,
    SingleClassDataset,
    DuplicateSession,
    VersionMismatch,
    IoFailure,
    CorruptRow,
    UnknownSession,
    BadState,
    MalformedSample,
    ValidationError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fengshui
