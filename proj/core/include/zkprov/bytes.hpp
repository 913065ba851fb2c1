#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zkprov {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(std::string_view hex); // throws Error(kParse) on bad input

Digest digest_from_hex(std::string_view hex); // exactly 64 lowercase hex chars

void append_le64(Bytes& out, std::uint64_t value);
std::uint64_t read_le64(std::span<const std::uint8_t, 8> bytes);

} // namespace zkprov
