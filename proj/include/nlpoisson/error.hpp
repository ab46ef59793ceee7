#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlpoisson {

enum class ErrorCode {
    InvalidArgument,
    InvalidResolution,
    Config,
    Quadrature,
    Assembly,
    Unsupported,
    NonConvergence,
    Singular,
    Invariant,
    Io,
};

/// Stable machine-readable token for an error code (used in `ERROR <code> ...` lines).
constexpr std::string_view code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::InvalidResolution: return "invalid-resolution";
        case ErrorCode::Config: return "config";
        case ErrorCode::Quadrature: return "quadrature";
        case ErrorCode::Assembly: return "assembly";
        case ErrorCode::Unsupported: return "unsupported";
        case ErrorCode::NonConvergence: return "non-convergence";
        case ErrorCode::Singular: return "singular";
        case ErrorCode::Invariant: return "invariant";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nlpoisson
