#pragma once

#include <stdexcept>
#include <string>

namespace rs {

// Exit-code classes of the CLI: invalid input (2), failed check (1),
// precision or resource exhaustion (3).
enum class ErrorClass { Invalid, Check, Precision };

enum class Err {
    NonSquarefreePolynomial,
    EvenPrime,
    OrdinaryForm,
    EqualRoots,
    RootsNotInField,
    NotAUnit,
    NonzeroConstantTerm,
    PrecisionExhausted,
    NotZpUnit,
    LevelMismatch,
    NotPsiZero,
    CheckFailed,
    ConductorExceedsLevel,
    IntegralityViolation,
    InsufficientPiPrecision,
    CoherenceFailure,
    DivisibilityFailure,
    GrowthBoundViolation,
    SingularQ,
    VanishingPrereqFailed,
    DivisionRemainder,
    NotAntisymmetric,
    SingularPhiShift,
    Unsupported,
    InvalidInput,
};

const char* err_name(Err e);
ErrorClass err_class(Err e);

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& msg);
    Err kind() const { return kind_; }
    const char* name() const { return err_name(kind_); }
    int exit_code() const;

private:
    Err kind_;
};

[[noreturn]] void fail(Err kind, const std::string& msg);

}  // namespace rs
