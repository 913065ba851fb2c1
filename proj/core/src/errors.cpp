#include "zkprov/errors.hpp"

namespace zkprov {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::kConfig:
        return "config";
    case ErrorCode::kDivisionByZero:
        return "division-by-zero";
    case ErrorCode::kMalformedCircuit:
        return "malformed-circuit";
    case ErrorCode::kMalformedWitness:
        return "malformed-witness";
    case ErrorCode::kUnsatisfiableInput:
        return "unsatisfiable-input";
    case ErrorCode::kInvariantViolation:
        return "invariant-violation";
    case ErrorCode::kParse:
        return "parse";
    case ErrorCode::kBadRequest:
        return "bad-request";
    case ErrorCode::kNotFound:
        return "not-found";
    case ErrorCode::kConflict:
        return "conflict";
    case ErrorCode::kStorage:
        return "storage";
    case ErrorCode::kOverloaded:
        return "overloaded";
    case ErrorCode::kNetwork:
        return "network";
    case ErrorCode::kInternal:
        return "internal";
    }
    return "internal";
}

} // namespace zkprov
