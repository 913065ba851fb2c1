#pragma once

#include <string>
#include <string_view>

#include "zkprov/backend.hpp"

namespace zkprov {

/// pk.bin: little-endian binary frame
///   "ZKPK" | u32 version=1 | u8 id_len | backend_id | 32-byte circuit id
///   | u64 payload_len | payload
std::string encode_proving_key(const ProvingKey& pk);
ProvingKey decode_proving_key(std::string_view bytes); // throws kParse

/// vk.json: canonical compact JSON, field modulus as a decimal string.
std::string encode_verifying_key(const VerifyingKey& vk);
VerifyingKey decode_verifying_key(std::string_view bytes); // throws kParse

} // namespace zkprov
