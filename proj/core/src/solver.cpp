#include <sstream>

#include "zkprov/circuit.hpp"
#include "zkprov/errors.hpp"

namespace zkprov {

SolveResult solve_witness(const CircuitArtifact& ecs, const std::vector<BigInt>& public_inputs,
                          const std::vector<BigInt>& private_inputs) {
    if (public_inputs.size() != ecs.num_public_inputs) {
        std::ostringstream os;
        os << "expected " << ecs.num_public_inputs << " public inputs, got "
           << public_inputs.size();
        throw Error(ErrorCode::kBadRequest, os.str());
    }
    if (private_inputs.size() != ecs.num_private_inputs) {
        std::ostringstream os;
        os << "expected " << ecs.num_private_inputs << " private inputs, got "
           << private_inputs.size();
        throw Error(ErrorCode::kBadRequest, os.str());
    }
    const Field& f = *ecs.field;
    for (const BigInt& v : public_inputs) {
        if (!f.is_canonical(v)) {
            throw Error(ErrorCode::kBadRequest, "public input not a canonical field element");
        }
    }
    for (const BigInt& v : private_inputs) {
        if (!f.is_canonical(v)) {
            throw Error(ErrorCode::kBadRequest, "private input not a canonical field element");
        }
    }

    WitnessVector w;
    w.values.assign(ecs.num_wires, BigInt(0));
    w.values[0] = 1;
    for (std::uint32_t i = 0; i < ecs.num_public_inputs; ++i) {
        w.values[ecs.public_input_wire(i)] = public_inputs[i];
    }
    for (std::uint32_t i = 0; i < ecs.num_private_inputs; ++i) {
        w.values[ecs.private_input_wire(i)] = private_inputs[i];
    }

    for (std::size_t i = 0; i < ecs.solver.size(); ++i) {
        std::visit(
            [&](const auto& op) {
                using T = std::decay_t<decltype(op)>;
                auto& vals = w.values;
                if constexpr (std::is_same_v<T, ConstOp>) {
                    vals[op.target] = op.value;
                } else if constexpr (std::is_same_v<T, AddOp>) {
                    vals[op.target] = f.add(vals[op.lhs], vals[op.rhs]);
                } else if constexpr (std::is_same_v<T, SubOp>) {
                    vals[op.target] = f.sub(vals[op.lhs], vals[op.rhs]);
                } else if constexpr (std::is_same_v<T, MulOp>) {
                    vals[op.target] = f.mul(vals[op.lhs], vals[op.rhs]);
                } else if constexpr (std::is_same_v<T, InvOp>) {
                    if (vals[op.src] == 0) {
                        throw Error(ErrorCode::kDivisionByZero,
                                    "solver instruction " + std::to_string(i) +
                                        ": inverse of zero",
                                    static_cast<std::int64_t>(i));
                    }
                    vals[op.target] = f.inv(vals[op.src]);
                } else { // AssertEqOp
                    if (vals[op.lhs] != vals[op.rhs]) {
                        throw Error(ErrorCode::kUnsatisfiableInput,
                                    "assertion failed at solver instruction " + std::to_string(i),
                                    static_cast<std::int64_t>(i));
                    }
                }
            },
            ecs.solver[i]);
    }

    SolveResult result;
    result.outputs.reserve(ecs.num_public_outputs);
    for (std::uint32_t i = 0; i < ecs.num_public_outputs; ++i) {
        result.outputs.push_back(w.values[ecs.output_wire(i)]);
    }
    result.witness = std::move(w);
    return result;
}

} // namespace zkprov
