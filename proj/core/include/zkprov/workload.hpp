#pragma once

#include <cstdint>
#include <vector>

#include "zkprov/circuit.hpp"
#include "zkprov/field.hpp"

namespace zkprov {

/// Size-parameterized benchmark circuit: the squaring chain
///   s_{i+1} = s_i^2 + s_i  for i = 0..n-1
/// with s_0 the single public input and s_n the single public output. One
/// constraint per step, so n is the constraint count, and every step depends
/// on the previous one, so proving cost scales with n and nothing degenerates
/// under constant folding.
struct WorkloadSpec {
    std::uint64_t n = 1;       // chain length = constraint count, >= 1
    BigInt modulus;            // zero means Field::default_modulus()
    BigInt seed_input = 3;     // s_0; reduced into the field
};

struct Workload {
    CircuitArtifact ecs;
    std::vector<BigInt> public_inputs; // {s_0}; no private inputs
};

Workload generate_workload(const WorkloadSpec& spec);

/// The squaring chain alone. Wire layout: 0 constant, 1 = s_0 (public
/// input), 2 = s_n (public output), 3..n+1 = s_1..s_{n-1},
/// n+2..2n+1 = the squares sq_0..sq_{n-1}. Constraint i is
///   s_i * s_i = s_{i+1} - s_i.
CircuitArtifact squaring_chain_circuit(std::uint64_t n, const FieldPtr& field);

/// A deliberately slow-to-solve chain, s_{i+1} = s_i^{-1}: each solver step
/// is a field inversion (an exponentiation), hundreds of times the cost of a
/// multiply. Used by tests that need a job to hold a worker busy for an
/// observable stretch without burning memory. s_0 must be nonzero.
CircuitArtifact inverse_chain_circuit(std::uint64_t n, const FieldPtr& field);

} // namespace zkprov
