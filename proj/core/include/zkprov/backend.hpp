#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zkprov/bytes.hpp"
#include "zkprov/circuit.hpp"
#include "zkprov/encoding.hpp"

namespace zkprov {

/// Per-circuit proving material. `payload` is opaque outside the backend that
/// produced it and must decode without error for the declared backend_id.
struct ProvingKey {
    std::string backend_id;
    CircuitId circuit_id;
    Bytes payload;

    bool operator==(const ProvingKey&) const = default;
};

/// Per-circuit verification material: the query count and a field echo, so a
/// verifier can check proofs with the registry's circuit alone.
struct VerifyingKey {
    std::string backend_id;
    CircuitId circuit_id;
    std::uint32_t k = 0;
    BigInt modulus;

    bool operator==(const VerifyingKey&) const = default;
};

struct KeyPair {
    ProvingKey pk;
    VerifyingKey vk;
};

/// Verifier decision. `reason` is one of the documented reject codes when
/// accepted is false, and empty otherwise.
struct VerifyResult {
    bool accepted = false;
    std::string reason;
};

inline constexpr std::string_view kRejectBadPath = "bad-path";
inline constexpr std::string_view kRejectBadPublicWire = "bad-public-wire";
inline constexpr std::string_view kRejectBadQueryOrder = "bad-query-order";
inline constexpr std::string_view kRejectConstraintViolated = "constraint-violated";

/// A proof system behind the service: setup once per circuit, prove per job,
/// verify on the consumer side. Proofs cross this interface in their wire
/// encoding so the service layer stays backend-neutral.
class ProvingBackend {
public:
    virtual ~ProvingBackend() = default;

    virtual std::string_view id() const = 0;

    /// Deterministic in (ecs, k). Throws kBadRequest for k = 0.
    virtual KeyPair setup(const CircuitArtifact& ecs, std::uint32_t k) const = 0;

    /// Requires a satisfied witness consistent with x and outputs at the
    /// public wires; anything else is an internal-consistency error
    /// (kInternal). Returns the proof wire encoding. Deterministic.
    virtual std::string prove(const ProvingKey& pk, const CircuitArtifact& ecs,
                              const WitnessVector& w, const std::vector<BigInt>& x,
                              const std::vector<BigInt>& outputs) const = 0;

    /// Throws kBadRequest when vk and ecs disagree on the circuit id or the
    /// proof is for another backend; malformed proof bytes throw kParse. All
    /// other failures come back as a reject with a reason code.
    virtual VerifyResult verify(const VerifyingKey& vk, const std::vector<BigInt>& x,
                                const std::vector<BigInt>& outputs, std::string_view proof_bytes,
                                const CircuitArtifact& ecs) const = 0;
};

inline constexpr std::string_view kSpotCheckBackendId = "merkle-spotcheck-v1";

/// Backend dispatch by id. Throws kNotFound for an unknown id.
const ProvingBackend& backend_for(std::string_view backend_id);
std::vector<std::string_view> backend_ids();

/// Fiat-Shamir sampling of k constraint indices (with replacement) bound to
/// the circuit id, the claimed publics, and the commitment root:
///   seed    = SHA-256("zkprovd/v1/queries" || circuit_id || LE64(|x|) || x
///                     || LE64(|outputs|) || outputs || root)
///   index_j = LE64(SHA-256(seed || LE64(j))[0..8)) mod m
/// with every field element in 32-byte little-endian form. Throws kBadRequest
/// for m = 0.
std::vector<std::uint32_t> derive_query_indices(const VerifyingKey& vk,
                                                const std::vector<BigInt>& x,
                                                const std::vector<BigInt>& outputs,
                                                const Digest& root, std::uint32_t m);

} // namespace zkprov
