#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bertini {

enum class ErrorKind {
    // malformed or contradictory input
    NotPrime,
    DegreeZero,
    SyntaxError,
    NotHomogeneous,
    BadVariableIndex,
    CoefficientNotInField,
    BadSpec,
    InvalidArgument,
    FieldMismatch,
    DivisionByZero,
    InconsistentCounts,
    XNotValidated,
    NotSingularHere,
    UnsupportedX,
    Divergent,
    PointsNotDistinct,
    NotSurjective,
    EmptyT,
    InconsistentConditions,
    // resource limits
    Overflow,
    BudgetExceeded,
    // internal
    InvariantBreach,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Parse failure carrying the byte offset of the offending character.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : Error(ErrorKind::SyntaxError, "at position " + std::to_string(position) + ": " + what),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// CLI exit code for an error: 2 input, 3 resource budget, 4 internal breach.
int exit_code_for(ErrorKind kind);

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) throw Error(kind, what);
}

}  // namespace bertini
