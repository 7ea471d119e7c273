#include "wpc/error.hpp"

namespace wpc {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonMonotonicLens: return "NonMonotonicLens";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::Diverged: return "Diverged";
        case ErrorCode::MissingTarget: return "MissingTarget";
        case ErrorCode::EmptyBox: return "EmptyBox";
        case ErrorCode::DegenerateLine: return "DegenerateLine";
        case ErrorCode::DegenerateLandmarks: return "DegenerateLandmarks";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace wpc
