#pragma once

#include <string>
#include <string_view>

#include "zkprov/errors.hpp"

namespace zkprov {

/// HTTP error body: {"error":{"code":"...","message":"..."}} plus an "index"
/// member when the error carries one.
std::string error_body(const Error& error);
std::string error_body(ErrorCode code, std::string_view message);

/// Status mapping used by both services; kept in one place so the error
/// contract stays uniform.
int http_status_for(ErrorCode code);

/// Inverse of to_string(ErrorCode); unknown strings decode as kInternal so a
/// newer server never crashes an older client.
ErrorCode error_code_from_string(std::string_view code);

std::string utc_now_rfc3339();

} // namespace zkprov
