#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "zkprov/bytes.hpp"
#include "zkprov/circuit.hpp"

namespace zkprov {

/// Identity of a circuit: SHA-256 of its canonical ECS encoding.
struct CircuitId {
    Digest bytes{};

    std::string hex() const { return to_hex(bytes); }
    static CircuitId from_hex(std::string_view hex); // throws kParse

    friend bool operator==(const CircuitId&, const CircuitId&) = default;
    friend std::strong_ordering operator<=>(const CircuitId&, const CircuitId&) = default;
};

/// Canonical ECS document: compact JSON, object keys sorted, no whitespace,
/// field values as canonical decimal strings. The encoding is a bijection on
/// valid artifacts: decode rejects every byte string encode could not have
/// produced, so decode(encode(ecs)) == ecs and encode(decode(b)) == b.
std::string encode_circuit(const CircuitArtifact& ecs);

/// Throws kParse (bad JSON or types), kMalformedCircuit (bad field modulus or
/// values), kInvariantViolation (structural invariants or non-canonical
/// encoding).
CircuitArtifact decode_circuit(std::string_view bytes);

CircuitId circuit_id(const CircuitArtifact& ecs);
CircuitId circuit_id_of_encoding(std::string_view bytes);

} // namespace zkprov
