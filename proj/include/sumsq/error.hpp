#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumsq {

enum class ErrorKind {
    InvalidArgument,
    BudgetExceeded,
    DegenerateInput,
    NonCoprimeModuli,
    SegmentTooLarge,
    ModulusMismatch,
    NoAdmissibleLift,
    LiftWindowEmpty,
    TooManyPatterns,
    SearchExhausted,
    HypothesisViolation,
    InternalInconsistency,
    ObstructionFound,
    DomainError,
    NoneFoundWithinBudget,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NonCoprimeModuli: return "NonCoprimeModuli";
    case ErrorKind::SegmentTooLarge: return "SegmentTooLarge";
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::NoAdmissibleLift: return "NoAdmissibleLift";
    case ErrorKind::LiftWindowEmpty: return "LiftWindowEmpty";
    case ErrorKind::TooManyPatterns: return "TooManyPatterns";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::ObstructionFound: return "ObstructionFound";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoneFoundWithinBudget: return "NoneFoundWithinBudget";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace sumsq
