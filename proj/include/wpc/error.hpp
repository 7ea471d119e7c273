#pragma once

#include <stdexcept>
#include <string>

namespace wpc {

enum class ErrorCode {
    DimensionMismatch,
    NonMonotonicLens,
    NoConvergence,
    Diverged,
    MissingTarget,
    EmptyBox,
    DegenerateLine,
    DegenerateLandmarks,
    BadMagic,
    TruncatedFile,
    EmptyDataset,
    InvalidArgument,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wpc
