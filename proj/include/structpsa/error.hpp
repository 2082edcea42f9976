#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace structpsa {

enum class ErrorCode {
    DimensionMismatch,
    SpecMismatch,
    InvalidSpec,
    ZeroProjection,
    SolverError,
    DefectivePair,
    PhaseUndefined,
    InsideSet,
    NotSingular,
    MultipleZero,
    NoRoot,
    AmbiguousBranch,
    Degenerate,
    Parse,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace structpsa
