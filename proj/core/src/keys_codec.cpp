#include "zkprov/keys_codec.hpp"

#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>

#include "zkprov/errors.hpp"

namespace zkprov {
namespace {

constexpr std::string_view kPkMagic = "ZKPK";

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>(static_cast<std::uint8_t>(v >> (8 * i))));
    }
}

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>(static_cast<std::uint8_t>(v >> (8 * i))));
    }
}

struct Reader {
    std::string_view data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (data.size() - pos < n) {
            throw Error(ErrorCode::kParse, "proving key truncated");
        }
    }
    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data[pos++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[pos + i])) << (8 * i);
        }
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data[pos + i])) << (8 * i);
        }
        pos += 8;
        return v;
    }
    std::string_view take(std::size_t n) {
        need(n);
        std::string_view out = data.substr(pos, n);
        pos += n;
        return out;
    }
};

} // namespace

std::string encode_proving_key(const ProvingKey& pk) {
    if (pk.backend_id.empty() || pk.backend_id.size() > 255) {
        throw Error(ErrorCode::kInternal, "backend id must be 1..255 bytes");
    }
    std::string out;
    out.reserve(4 + 4 + 1 + pk.backend_id.size() + 32 + 8 + pk.payload.size());
    out.append(kPkMagic);
    append_u32(out, 1);
    out.push_back(static_cast<char>(static_cast<std::uint8_t>(pk.backend_id.size())));
    out.append(pk.backend_id);
    out.append(reinterpret_cast<const char*>(pk.circuit_id.bytes.data()),
               pk.circuit_id.bytes.size());
    append_u64(out, pk.payload.size());
    out.append(reinterpret_cast<const char*>(pk.payload.data()), pk.payload.size());
    return out;
}

ProvingKey decode_proving_key(std::string_view bytes) {
    Reader r{bytes};
    if (r.take(4) != kPkMagic) {
        throw Error(ErrorCode::kParse, "proving key: bad magic");
    }
    if (r.u32() != 1) {
        throw Error(ErrorCode::kParse, "proving key: unsupported version");
    }
    ProvingKey pk;
    std::uint8_t id_len = r.u8();
    if (id_len == 0) {
        throw Error(ErrorCode::kParse, "proving key: empty backend id");
    }
    pk.backend_id = std::string(r.take(id_len));
    std::string_view cid = r.take(32);
    std::copy(cid.begin(), cid.end(),
              reinterpret_cast<char*>(pk.circuit_id.bytes.data()));
    std::uint64_t payload_len = r.u64();
    if (payload_len != bytes.size() - r.pos) {
        throw Error(ErrorCode::kParse, "proving key: payload length mismatch");
    }
    std::string_view payload = r.take(static_cast<std::size_t>(payload_len));
    pk.payload.assign(payload.begin(), payload.end());
    return pk;
}

std::string encode_verifying_key(const VerifyingKey& vk) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["backend"] = vk.backend_id;
    doc["circuit_id"] = vk.circuit_id.hex();
    doc["k"] = vk.k;
    doc["field"] = nlohmann::json{{"modulus", to_decimal(vk.modulus)}};
    return doc.dump();
}

VerifyingKey decode_verifying_key(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string("verifying key: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || doc["version"] != 1) {
        throw Error(ErrorCode::kParse, "verifying key: unsupported document");
    }
    VerifyingKey vk;
    if (!doc.contains("backend") || !doc["backend"].is_string()) {
        throw Error(ErrorCode::kParse, "verifying key: missing backend");
    }
    vk.backend_id = doc["backend"].get<std::string>();
    if (!doc.contains("circuit_id") || !doc["circuit_id"].is_string()) {
        throw Error(ErrorCode::kParse, "verifying key: missing circuit_id");
    }
    vk.circuit_id = CircuitId::from_hex(doc["circuit_id"].get<std::string>());
    if (!doc.contains("k") || !doc["k"].is_number_unsigned() ||
        doc["k"].get<std::uint64_t>() == 0 ||
        doc["k"].get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::kParse, "verifying key: k must be a positive integer");
    }
    vk.k = doc["k"].get<std::uint32_t>();
    if (!doc.contains("field") || !doc["field"].is_object() ||
        !doc["field"].contains("modulus") || !doc["field"]["modulus"].is_string()) {
        throw Error(ErrorCode::kParse, "verifying key: missing field modulus");
    }
    vk.modulus = parse_decimal(doc["field"]["modulus"].get<std::string>());
    return vk;
}

} // namespace zkprov
