#include "rs/errors.hpp"

namespace rs {

const char* err_name(Err e) {
    switch (e) {
    case Err::NonSquarefreePolynomial: return "NonSquarefreePolynomial";
    case Err::EvenPrime: return "EvenPrime";
    case Err::OrdinaryForm: return "OrdinaryForm";
    case Err::EqualRoots: return "EqualRoots";
    case Err::RootsNotInField: return "RootsNotInField";
    case Err::NotAUnit: return "NotAUnit";
    case Err::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case Err::PrecisionExhausted: return "PrecisionExhausted";
    case Err::NotZpUnit: return "NotZpUnit";
    case Err::LevelMismatch: return "LevelMismatch";
    case Err::NotPsiZero: return "NotPsiZero";
    case Err::CheckFailed: return "CheckFailed";
    case Err::ConductorExceedsLevel: return "ConductorExceedsLevel";
    case Err::IntegralityViolation: return "IntegralityViolation";
    case Err::InsufficientPiPrecision: return "InsufficientPiPrecision";
    case Err::CoherenceFailure: return "CoherenceFailure";
    case Err::DivisibilityFailure: return "DivisibilityFailure";
    case Err::GrowthBoundViolation: return "GrowthBoundViolation";
    case Err::SingularQ: return "SingularQ";
    case Err::VanishingPrereqFailed: return "VanishingPrereqFailed";
    case Err::DivisionRemainder: return "DivisionRemainder";
    case Err::NotAntisymmetric: return "NotAntisymmetric";
    case Err::SingularPhiShift: return "SingularPhiShift";
    case Err::Unsupported: return "Unsupported";
    case Err::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

ErrorClass err_class(Err e) {
    switch (e) {
    case Err::PrecisionExhausted:
    case Err::InsufficientPiPrecision:
        return ErrorClass::Precision;
    case Err::NotPsiZero:
    case Err::CheckFailed:
    case Err::IntegralityViolation:
    case Err::CoherenceFailure:
    case Err::DivisibilityFailure:
    case Err::GrowthBoundViolation:
    case Err::VanishingPrereqFailed:
    case Err::DivisionRemainder:
    case Err::NotAntisymmetric:
        return ErrorClass::Check;
    default:
        return ErrorClass::Invalid;
    }
}

Error::Error(Err kind, const std::string& msg)
    : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}

int Error::exit_code() const {
    switch (err_class(kind_)) {
    case ErrorClass::Check: return 1;
    case ErrorClass::Precision: return 3;
    default: return 2;
    }
}

void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace rs
