#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zkprov {

enum class ErrorCode {
    kConfig,
    kDivisionByZero,
    kMalformedCircuit,
    kMalformedWitness,
    kUnsatisfiableInput,
    kInvariantViolation,
    kParse,
    kBadRequest,
    kNotFound,
    kConflict,
    kStorage,
    kOverloaded,
    kNetwork,
    kInternal,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the whole library; `code()` selects the
/// contract-level error class, `index()` optionally points at the offending
/// instruction or constraint.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    Error(ErrorCode code, std::string message, std::int64_t index)
        : std::runtime_error(std::move(message)), code_(code), index_(index) {}

    ErrorCode code() const { return code_; }
    std::int64_t index() const { return index_; }
    bool has_index() const { return index_ >= 0; }

private:
    ErrorCode code_;
    std::int64_t index_ = -1;
};

} // namespace zkprov
