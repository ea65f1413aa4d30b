#include "macd/types.hpp"

namespace macd {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::CorpusTooSmall: return "CorpusTooSmall";
        case ErrorCode::InvalidOrder: return "InvalidOrder";
        case ErrorCode::VocabMismatch: return "VocabMismatch";
        case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::NegativeDelta: return "NegativeDelta";
        case ErrorCode::CrOutOfRange: return "CrOutOfRange";
        case ErrorCode::MissingFullDistributions: return "MissingFullDistributions";
        case ErrorCode::EmptyCandidateSet: return "EmptyCandidateSet";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::ModelNotFound: return "ModelNotFound";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InsufficientAmateurs: return "InsufficientAmateurs";
    }
    return "Unknown";
}

}  // namespace macd
