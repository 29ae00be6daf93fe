#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace glimm {

enum class ErrorKind {
    NonHyperbolic,
    SingularJacobian,
    CurveIntegrationFailure,
    HugoniotSolveFailure,
    NewtonDivergence,
    AdmissibilityViolation,
    BallExit,
    SmallDataExceeded,
    BoundaryReached,
    CflViolation,
    UnknownSystem,
    InvalidParams,
    ParseError,
    ValidationError,
    IntegrationFailure,
    NonConvex,
    SnapshotUnavailable,
};

std::string_view to_string(ErrorKind kind);

// CLI exit status: 2 config error, 3 numerical failure, 4 theory-regime breach.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Where in the space-time grid a stepping failure happened, if known.
    std::optional<long> strip;
    std::optional<long> mesh_point;

    Error& at(long s, long r) {
        strip = s;
        mesh_point = r;
        return *this;
    }

private:
    ErrorKind kind_;
};

}  // namespace glimm
