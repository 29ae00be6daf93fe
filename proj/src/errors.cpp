#include "glimm/errors.hpp"

namespace glimm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NonHyperbolic: return "NonHyperbolic";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::CurveIntegrationFailure: return "CurveIntegrationFailure";
    case ErrorKind::HugoniotSolveFailure: return "HugoniotSolveFailure";
    case ErrorKind::NewtonDivergence: return "NewtonDivergence";
    case ErrorKind::AdmissibilityViolation: return "AdmissibilityViolation";
    case ErrorKind::BallExit: return "BallExit";
    case ErrorKind::SmallDataExceeded: return "SmallDataExceeded";
    case ErrorKind::BoundaryReached: return "BoundaryReached";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::UnknownSystem: return "UnknownSystem";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::NonConvex: return "NonConvex";
    case ErrorKind::SnapshotUnavailable: return "SnapshotUnavailable";
    }
    return "Unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::UnknownSystem:
    case ErrorKind::InvalidParams:
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
        return 2;
    case ErrorKind::BallExit:
    case ErrorKind::SmallDataExceeded:
    case ErrorKind::BoundaryReached:
        return 4;
    default:
        return 3;
    }
}

}  // namespace glimm
