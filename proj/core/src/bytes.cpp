#include "zkprov/bytes.hpp"

#include "zkprov/errors.hpp"

namespace zkprov {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1; // uppercase rejected: encodings are lowercase-canonical
}
} // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::kParse, "hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::kParse, "invalid hex digit");
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Digest digest_from_hex(std::string_view hex) {
    if (hex.size() != 64) {
        throw Error(ErrorCode::kParse, "digest must be 64 hex characters");
    }
    Bytes raw = from_hex(hex);
    Digest d{};
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

void append_le64(Bytes& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

std::uint64_t read_le64(std::span<const std::uint8_t, 8> bytes) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    }
    return v;
}

} // namespace zkprov
