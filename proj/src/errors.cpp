#include "sdd/errors.hpp"

namespace sdd {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::UnlabeledPost: return "UnlabeledPost";
        case ErrorCode::EmptyKeywordSet: return "EmptyKeywordSet";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
        case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorCode::NegativeFeature: return "NegativeFeature";
        case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::FractionOutOfRange: return "FractionOutOfRange";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::CorruptModel: return "CorruptModel";
        case ErrorCode::UnknownKey: return "UnknownKey";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::FileNotFound: return "FileNotFound";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::EmptyReportList: return "EmptyReportList";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace sdd
