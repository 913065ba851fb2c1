#include "zkprov/circuit.hpp"

#include <sstream>

#include "zkprov/errors.hpp"

namespace zkprov {

namespace {

[[noreturn]] void invariant_error(const std::string& what) {
    throw Error(ErrorCode::kInvariantViolation, what);
}

void validate_lc(const LinearCombination& lc, std::uint32_t num_wires, const Field& field,
                 const char* where, std::size_t constraint_index) {
    WireIndex prev = 0;
    bool first = true;
    for (const auto& [wire, coeff] : lc.terms) {
        if (!first && wire <= prev) {
            std::ostringstream os;
            os << "constraint " << constraint_index << " " << where
               << ": wire indices not strictly increasing";
            invariant_error(os.str());
        }
        if (wire >= num_wires) {
            std::ostringstream os;
            os << "constraint " << constraint_index << " " << where << ": wire " << wire
               << " out of range (num_wires=" << num_wires << ")";
            invariant_error(os.str());
        }
        if (coeff == 0) {
            std::ostringstream os;
            os << "constraint " << constraint_index << " " << where << ": zero coefficient stored";
            invariant_error(os.str());
        }
        if (!field.is_canonical(coeff)) {
            std::ostringstream os;
            os << "constraint " << constraint_index << " " << where
               << ": coefficient not a canonical field element";
            invariant_error(os.str());
        }
        prev = wire;
        first = false;
    }
}

} // namespace

bool CircuitArtifact::is_input_wire(WireIndex w) const {
    if (w == 0) return true;
    if (w >= 1 && w <= num_public_inputs) return true;
    WireIndex first_priv = 1 + num_public_inputs + num_public_outputs;
    return w >= first_priv && w < first_priv + num_private_inputs;
}

void CircuitArtifact::validate() const {
    if (!field) invariant_error("circuit has no field");
    if (num_wires < 1) invariant_error("num_wires must be >= 1");
    std::uint64_t fixed = 1ull + num_public_inputs + num_public_outputs + num_private_inputs;
    if (fixed > num_wires) {
        invariant_error("wire layout exceeds num_wires");
    }
    if (name.size() > 200) invariant_error("name longer than 200 bytes");

    for (std::size_t i = 0; i < constraints.size(); ++i) {
        validate_lc(constraints[i].a, num_wires, *field, "a", i);
        validate_lc(constraints[i].b, num_wires, *field, "b", i);
        validate_lc(constraints[i].c, num_wires, *field, "c", i);
    }

    // Solver: single assignment, sources before use, inputs never targets,
    // and full coverage of output + internal wires.
    std::vector<bool> assigned(num_wires, false);
    assigned[0] = true;
    for (std::uint32_t i = 0; i < num_public_inputs; ++i) assigned[public_input_wire(i)] = true;
    for (std::uint32_t i = 0; i < num_private_inputs; ++i) assigned[private_input_wire(i)] = true;

    auto check_source = [&](WireIndex w, std::size_t instr) {
        if (w >= num_wires) {
            std::ostringstream os;
            os << "solver instruction " << instr << ": source wire " << w << " out of range";
            invariant_error(os.str());
        }
        if (!assigned[w]) {
            std::ostringstream os;
            os << "solver instruction " << instr << ": source wire " << w
               << " used before assignment";
            invariant_error(os.str());
        }
    };
    auto check_target = [&](WireIndex w, std::size_t instr) {
        if (w >= num_wires) {
            std::ostringstream os;
            os << "solver instruction " << instr << ": target wire " << w << " out of range";
            invariant_error(os.str());
        }
        if (is_input_wire(w)) {
            std::ostringstream os;
            os << "solver instruction " << instr << ": input wire " << w << " used as target";
            invariant_error(os.str());
        }
        if (assigned[w]) {
            std::ostringstream os;
            os << "solver instruction " << instr << ": wire " << w << " assigned twice";
            invariant_error(os.str());
        }
        assigned[w] = true;
    };

    for (std::size_t i = 0; i < solver.size(); ++i) {
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, ConstOp>) {
                    if (!field->is_canonical(op.value)) {
                        std::ostringstream os;
                        os << "solver instruction " << i << ": constant not canonical";
                        invariant_error(os.str());
                    }
                    check_target(op.target, i);
                } else if constexpr (std::is_same_v<T, AddOp> || std::is_same_v<T, SubOp> ||
                                     std::is_same_v<T, MulOp>) {
                    check_source(op.lhs, i);
                    check_source(op.rhs, i);
                    check_target(op.target, i);
                } else if constexpr (std::is_same_v<T, InvOp>) {
                    check_source(op.src, i);
                    check_target(op.target, i);
                } else { // AssertEqOp
                    check_source(op.lhs, i);
                    check_source(op.rhs, i);
                }
            },
            solver[i]);
    }

    for (WireIndex w = 0; w < num_wires; ++w) {
        if (!assigned[w]) {
            std::ostringstream os;
            os << "solver never assigns wire " << w;
            invariant_error(os.str());
        }
    }
}

bool CircuitArtifact::equals(const CircuitArtifact& other) const {
    return field && other.field && field->same_as(*other.field) &&
           num_public_inputs == other.num_public_inputs &&
           num_public_outputs == other.num_public_outputs &&
           num_private_inputs == other.num_private_inputs && num_wires == other.num_wires &&
           constraints == other.constraints && solver == other.solver && name == other.name;
}

BigInt evaluate(const LinearCombination& lc, const WitnessVector& w, const Field& field) {
    BigInt acc = 0;
    for (const auto& [wire, coeff] : lc.terms) {
        if (wire >= w.size()) {
            throw Error(ErrorCode::kMalformedCircuit, "linear combination references wire " +
                                                          std::to_string(wire) +
                                                          " beyond witness length");
        }
        acc += coeff * w.values[wire];
    }
    return field.reduce(acc);
}

std::vector<std::size_t> check_constraints(const CircuitArtifact& ecs, const WitnessVector& w) {
    if (w.size() != ecs.num_wires) {
        throw Error(ErrorCode::kMalformedWitness,
                    "witness length " + std::to_string(w.size()) + " does not match num_wires " +
                        std::to_string(ecs.num_wires));
    }
    std::vector<std::size_t> violated;
    const Field& f = *ecs.field;
    for (std::size_t i = 0; i < ecs.constraints.size(); ++i) {
        const Constraint& c = ecs.constraints[i];
        BigInt lhs = f.mul(evaluate(c.a, w, f), evaluate(c.b, w, f));
        if (lhs != evaluate(c.c, w, f)) {
            violated.push_back(i);
        }
    }
    return violated;
}

} // namespace zkprov
