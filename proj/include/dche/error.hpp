#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dche {

enum class ErrorKind {
    InvalidArgument,
    InvalidLowerParameter,
    NoConvergence,
    ArgumentOutOfRange,
    RequiresFloatingPoint,
    Irreducible,
    IrreducibleResidual,
    DivisionByZero,
    FamilyInapplicable,
    ResonantIndex,
    SlowConvergence,
    DomainError,
    ApparentSingularity,
    ConditionViolated,
    RootFindingStalled,
    NotTerminated,
    StepUnderflow,
    PathViolation,
    VerificationFailed,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidLowerParameter: return "InvalidLowerParameter";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ArgumentOutOfRange: return "ArgumentOutOfRange";
    case ErrorKind::RequiresFloatingPoint: return "RequiresFloatingPoint";
    case ErrorKind::Irreducible: return "Irreducible";
    case ErrorKind::IrreducibleResidual: return "IrreducibleResidual";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FamilyInapplicable: return "FamilyInapplicable";
    case ErrorKind::ResonantIndex: return "ResonantIndex";
    case ErrorKind::SlowConvergence: return "SlowConvergence";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ApparentSingularity: return "ApparentSingularity";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::RootFindingStalled: return "RootFindingStalled";
    case ErrorKind::NotTerminated: return "NotTerminated";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::PathViolation: return "PathViolation";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace dche
