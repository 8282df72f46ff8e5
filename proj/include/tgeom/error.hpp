#pragma once

#include <stdexcept>
#include <string>

namespace tgeom {

enum class ErrorCode {
    chart_mismatch,    // points/charts of incompatible dimension
    invalid_argument,  // malformed input (bad chart, non-finite coordinate, ...)
    degenerate,        // geometric precondition fails (lightlike axis, dependent points)
    undefined,         // value not defined by the model (deformed gap, spacelike legs)
    not_converged,     // iterative solver failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tgeom
