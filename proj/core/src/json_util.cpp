#include "zkprov/json_util.hpp"

#include <ctime>

#include <nlohmann/json.hpp>

namespace zkprov {

std::string error_body(ErrorCode code, std::string_view message) {
    nlohmann::json doc;
    doc["error"]["code"] = std::string(to_string(code));
    doc["error"]["message"] = std::string(message);
    return doc.dump();
}

std::string error_body(const Error& error) {
    nlohmann::json doc;
    doc["error"]["code"] = std::string(to_string(error.code()));
    doc["error"]["message"] = std::string(error.what());
    if (error.has_index()) {
        doc["error"]["index"] = error.index();
    }
    return doc.dump();
}

int http_status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kBadRequest:
        return 400;
    case ErrorCode::kNotFound:
        return 404;
    case ErrorCode::kConflict:
        return 409;
    case ErrorCode::kMalformedCircuit:
    case ErrorCode::kMalformedWitness:
    case ErrorCode::kInvariantViolation:
    case ErrorCode::kUnsatisfiableInput:
    case ErrorCode::kDivisionByZero:
        return 422;
    case ErrorCode::kOverloaded:
        return 503;
    case ErrorCode::kConfig:
    case ErrorCode::kStorage:
    case ErrorCode::kNetwork:
    case ErrorCode::kInternal:
        return 500;
    }
    return 500;
}

ErrorCode error_code_from_string(std::string_view code) {
    static constexpr ErrorCode kAll[] = {
        ErrorCode::kConfig,          ErrorCode::kDivisionByZero,
        ErrorCode::kMalformedCircuit, ErrorCode::kMalformedWitness,
        ErrorCode::kUnsatisfiableInput, ErrorCode::kInvariantViolation,
        ErrorCode::kParse,           ErrorCode::kBadRequest,
        ErrorCode::kNotFound,        ErrorCode::kConflict,
        ErrorCode::kStorage,         ErrorCode::kOverloaded,
        ErrorCode::kNetwork,         ErrorCode::kInternal,
    };
    for (ErrorCode c : kAll) {
        if (to_string(c) == code) return c;
    }
    return ErrorCode::kInternal;
}

std::string utc_now_rfc3339() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace zkprov
