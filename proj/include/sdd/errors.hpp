#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdd {

// Error categories shared by the whole pipeline.  The enumerator names are
// the machine-parsable categories emitted on the CLI and mapped 1:1 onto the
// C API status codes.
enum class ErrorCode {
    IoFailure,
    MissingColumn,
    DuplicateId,
    UnknownLabel,
    MalformedRecord,
    UnlabeledPost,
    EmptyKeywordSet,
    EmptyCorpus,
    EmptyVocabulary,
    EmptyTrainingSet,
    NegativeFeature,
    NonFiniteObjective,
    EmptyClass,
    FractionOutOfRange,
    KTooLarge,
    LengthMismatch,
    LabelOutOfRange,
    EmptyMatrix,
    DimensionMismatch,
    VersionMismatch,
    CorruptModel,
    UnknownKey,
    TypeMismatch,
    FileNotFound,
    InvalidSpec,
    EmptyReportList,
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code),
          message_(message) {}

    ErrorCode code() const { return code_; }
    // message without the category prefix that what() carries
    const std::string& message() const { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace sdd
