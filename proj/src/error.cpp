#include "bertini/config.hpp"
#include "bertini/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace bertini {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::DegreeZero: return "DegreeZero";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::NotHomogeneous: return "NotHomogeneous";
        case ErrorKind::BadVariableIndex: return "BadVariableIndex";
        case ErrorKind::CoefficientNotInField: return "CoefficientNotInField";
        case ErrorKind::BadSpec: return "BadSpec";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::FieldMismatch: return "FieldMismatch";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::InconsistentCounts: return "InconsistentCounts";
        case ErrorKind::XNotValidated: return "XNotValidated";
        case ErrorKind::NotSingularHere: return "NotSingularHere";
        case ErrorKind::UnsupportedX: return "UnsupportedX";
        case ErrorKind::Divergent: return "Divergent";
        case ErrorKind::PointsNotDistinct: return "PointsNotDistinct";
        case ErrorKind::NotSurjective: return "NotSurjective";
        case ErrorKind::EmptyT: return "EmptyT";
        case ErrorKind::InconsistentConditions: return "InconsistentConditions";
        case ErrorKind::Overflow: return "Overflow";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InvariantBreach: return "InvariantBreach";
    }
    return "Error";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Overflow:
        case ErrorKind::BudgetExceeded:
            return 3;
        case ErrorKind::InvariantBreach:
            return 4;
        default:
            return 2;
    }
}

namespace config {
namespace {

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    unsigned long long v = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || v == 0) return fallback;
    return v;
}

std::atomic<unsigned>& field_bits() {
    static std::atomic<unsigned> v{static_cast<unsigned>(env_or("BERTINI_MAX_FIELD_BITS", 20))};
    return v;
}

std::atomic<std::uint64_t>& scan_points() {
    static std::atomic<std::uint64_t> v{env_or("BERTINI_MAX_SCAN_POINTS", std::uint64_t{1} << 22)};
    return v;
}

std::atomic<std::uint64_t>& exhaustive() {
    static std::atomic<std::uint64_t> v{std::uint64_t{1} << 24};
    return v;
}

}  // namespace

unsigned max_field_bits() { return field_bits().load(); }
void set_max_field_bits(unsigned bits) { field_bits().store(bits); }

std::uint64_t max_scan_points() { return scan_points().load(); }
void set_max_scan_points(std::uint64_t points) { scan_points().store(points); }

std::uint64_t exhaustive_budget() { return exhaustive().load(); }
void set_exhaustive_budget(std::uint64_t forms) { exhaustive().store(forms); }

}  // namespace config
}  // namespace bertini
