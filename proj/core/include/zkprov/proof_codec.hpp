#pragma once

#include <string>
#include <string_view>

#include "zkprov/spotcheck.hpp"

namespace zkprov {

/// Proof wire encoding: compact JSON with sorted keys, byte fields as
/// lowercase hex, field elements as decimal strings. Deterministic.
std::string encode_proof(const Proof& proof);

/// Strict inverse of encode_proof. Throws kParse on anything else, including
/// a proof tagged for a different backend.
Proof decode_proof(std::string_view bytes);

} // namespace zkprov
