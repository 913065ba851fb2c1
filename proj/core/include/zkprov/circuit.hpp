#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zkprov/field.hpp"

namespace zkprov {

using WireIndex = std::uint32_t;

/// Sparse linear combination over wires. Canonical form: indices strictly
/// increasing, no zero coefficients, coefficients canonical in the field.
struct LinearCombination {
    std::vector<std::pair<WireIndex, BigInt>> terms;

    bool operator==(const LinearCombination&) const = default;
};

/// Rank-1 constraint: <a,w> * <b,w> = <c,w>.
struct Constraint {
    LinearCombination a;
    LinearCombination b;
    LinearCombination c;

    bool operator==(const Constraint&) const = default;
};

// Straight-line witness-solver instructions. Targets are written exactly
// once; input wires are never targets.
struct ConstOp {
    WireIndex target;
    BigInt value;
    bool operator==(const ConstOp&) const = default;
};
struct AddOp {
    WireIndex target, lhs, rhs;
    bool operator==(const AddOp&) const = default;
};
struct SubOp {
    WireIndex target, lhs, rhs;
    bool operator==(const SubOp&) const = default;
};
struct MulOp {
    WireIndex target, lhs, rhs;
    bool operator==(const MulOp&) const = default;
};
struct InvOp {
    WireIndex target, src;
    bool operator==(const InvOp&) const = default;
};
struct AssertEqOp {
    WireIndex lhs, rhs;
    bool operator==(const AssertEqOp&) const = default;
};

using SolverInstruction = std::variant<ConstOp, AddOp, SubOp, MulOp, InvOp, AssertEqOp>;

/// The executable constraint system: an R1CS plus the deterministic solver
/// program that produces witnesses, with a fixed wire layout:
///   wire 0                      constant one
///   1 .. num_public_inputs      public inputs
///   then num_public_outputs     public outputs
///   then num_private_inputs     private inputs
///   remainder                   internal wires
struct CircuitArtifact {
    FieldPtr field;
    std::uint32_t num_public_inputs = 0;
    std::uint32_t num_public_outputs = 0;
    std::uint32_t num_private_inputs = 0;
    std::uint32_t num_wires = 1;
    std::vector<Constraint> constraints;
    std::vector<SolverInstruction> solver;
    std::string name;

    WireIndex public_input_wire(std::uint32_t i) const { return 1 + i; }
    WireIndex output_wire(std::uint32_t i) const { return 1 + num_public_inputs + i; }
    WireIndex private_input_wire(std::uint32_t i) const {
        return 1 + num_public_inputs + num_public_outputs + i;
    }
    WireIndex first_internal_wire() const {
        return 1 + num_public_inputs + num_public_outputs + num_private_inputs;
    }
    bool is_input_wire(WireIndex w) const;

    /// Checks every structural invariant (wire ranges, canonical linear
    /// combinations, single-assignment solver covering all non-input wires).
    /// Throws Error(kInvariantViolation) with a description.
    void validate() const;

    bool equals(const CircuitArtifact& other) const;
};

/// Dense assignment of every wire; values[0] is the constant one.
struct WitnessVector {
    std::vector<BigInt> values;

    std::size_t size() const { return values.size(); }
    bool operator==(const WitnessVector&) const = default;
};

/// Sum of coeff * w[index] in the circuit's field.
BigInt evaluate(const LinearCombination& lc, const WitnessVector& w, const Field& field);

/// Indices of violated constraints, ascending; empty means satisfied.
std::vector<std::size_t> check_constraints(const CircuitArtifact& ecs, const WitnessVector& w);

struct SolveResult {
    WitnessVector witness;
    std::vector<BigInt> outputs;
};

/// Runs the solver program with wire 0 = 1 and the inputs bound per the wire
/// layout. Deterministic. Throws kBadRequest (arity or non-canonical input),
/// kUnsatisfiableInput (failed AssertEq, carries the instruction index), or
/// kDivisionByZero (Inv of zero).
SolveResult solve_witness(const CircuitArtifact& ecs,
                          const std::vector<BigInt>& public_inputs,
                          const std::vector<BigInt>& private_inputs);

} // namespace zkprov
