#pragma once

#include <cstdint>
#include <vector>

#include "zkprov/backend.hpp"
#include "zkprov/circuit.hpp"
#include "zkprov/merkle.hpp"

namespace zkprov {

/// One authenticated wire value: leaf `path.leaf_index == wire` of the
/// witness commitment.
struct Opening {
    WireIndex wire = 0;
    BigInt value;
    MerklePath path;

    bool operator==(const Opening&) const = default;
};

/// Answers one sampled constraint: openings for exactly the wires the
/// constraint references, ascending by wire.
struct QueryOpening {
    std::uint32_t constraint_index = 0;
    std::vector<Opening> openings;

    bool operator==(const QueryOpening&) const = default;
};

/// Merkle-commitment constraint spot-check proof. The root commits to all
/// num_leaves = num_wires witness values; public_openings cover wire 0 and
/// every public input/output wire; query_openings answer
/// derive_query_indices in order. Not zero-knowledge, not succinct: openings
/// reveal the touched witness values.
struct Proof {
    Digest root{};
    std::uint64_t num_leaves = 0;
    std::vector<Opening> public_openings;
    std::vector<QueryOpening> query_openings;
    std::vector<BigInt> outputs;

    bool operator==(const Proof&) const = default;
};

/// Structured-form prove/verify used by the wire-level backend entry points
/// and by tests that need to manipulate proof fields directly.
Proof prove_spotcheck(const ProvingKey& pk, const CircuitArtifact& ecs, const WitnessVector& w,
                      const std::vector<BigInt>& x, const std::vector<BigInt>& outputs);
VerifyResult verify_spotcheck(const VerifyingKey& vk, const std::vector<BigInt>& x,
                              const std::vector<BigInt>& outputs, const Proof& proof,
                              const CircuitArtifact& ecs);

namespace detail {

/// Commits to `w` exactly as given and answers the derived queries without
/// checking satisfiability. Seam for adversarial provers in soundness tests;
/// prove_spotcheck is this plus the consistency checks.
Proof build_spotcheck_proof(const VerifyingKey& vk, const CircuitArtifact& ecs,
                            const WitnessVector& w, const std::vector<BigInt>& x,
                            const std::vector<BigInt>& outputs);

/// pk payload: "SPCK" | u32 version=1 | u32 k | u64 m | per constraint the
/// a,b,c rows, each as u64 count then (u32 wire, 32-byte LE coefficient).
struct PkPayload {
    std::uint32_t k = 0;
    std::vector<Constraint> rows;
};
Bytes encode_pk_payload(const CircuitArtifact& ecs, std::uint32_t k);
PkPayload decode_pk_payload(std::span<const std::uint8_t> bytes); // throws kParse

} // namespace detail
} // namespace zkprov
