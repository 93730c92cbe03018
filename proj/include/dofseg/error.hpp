#pragma once

#include <stdexcept>
#include <string>

namespace dofseg {

enum class ErrorCode {
    InvalidArgument = 1,
    DimensionMismatch,
    DecodeFailed,
    IoFailed,
    EmptyReference,
    NoPixels,
    SingletonClass,
    NoForeignImages,
    NoFocusRegion,
};

// Core error type; the C API maps code() onto dofseg_status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dofseg
