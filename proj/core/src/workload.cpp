#include "zkprov/workload.hpp"

#include <algorithm>
#include <string>

#include "zkprov/errors.hpp"

namespace zkprov {
namespace {

// 2n+2 wires must fit WireIndex.
void check_chain_length(std::uint64_t n) {
    if (n == 0) {
        throw Error(ErrorCode::kConfig, "chain length must be at least 1");
    }
    if (n > (std::uint64_t{1} << 31) - 2) {
        throw Error(ErrorCode::kConfig, "chain length overflows the wire index space");
    }
}

LinearCombination lc(std::vector<std::pair<WireIndex, BigInt>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return LinearCombination{std::move(terms)};
}

} // namespace

CircuitArtifact squaring_chain_circuit(std::uint64_t n, const FieldPtr& field) {
    check_chain_length(n);

    CircuitArtifact ecs;
    ecs.field = field;
    ecs.num_public_inputs = 1;
    ecs.num_public_outputs = 1;
    ecs.num_private_inputs = 0;
    ecs.num_wires = static_cast<std::uint32_t>(2 * n + 2);
    ecs.name = "squaring-chain-n" + std::to_string(n);

    // s_0 is wire 1, s_n wire 2, s_1..s_{n-1} wires 3..n+1.
    const auto s_wire = [n](std::uint64_t i) -> WireIndex {
        if (i == 0) return 1;
        if (i == n) return 2;
        return static_cast<WireIndex>(2 + i);
    };
    const auto sq_wire = [n](std::uint64_t i) -> WireIndex {
        return static_cast<WireIndex>(n + 2 + i);
    };

    const BigInt minus_one = field->neg(1);
    ecs.constraints.reserve(n);
    ecs.solver.reserve(2 * n);
    for (std::uint64_t i = 0; i < n; ++i) {
        Constraint con;
        con.a = lc({{s_wire(i), 1}});
        con.b = lc({{s_wire(i), 1}});
        con.c = lc({{s_wire(i + 1), 1}, {s_wire(i), minus_one}});
        ecs.constraints.push_back(std::move(con));

        ecs.solver.emplace_back(MulOp{sq_wire(i), s_wire(i), s_wire(i)});
        ecs.solver.emplace_back(AddOp{s_wire(i + 1), sq_wire(i), s_wire(i)});
    }

    ecs.validate();
    return ecs;
}

CircuitArtifact inverse_chain_circuit(std::uint64_t n, const FieldPtr& field) {
    check_chain_length(n);

    CircuitArtifact ecs;
    ecs.field = field;
    ecs.num_public_inputs = 1;
    ecs.num_public_outputs = 1;
    ecs.num_private_inputs = 0;
    ecs.num_wires = static_cast<std::uint32_t>(n + 2);
    ecs.name = "inverse-chain-n" + std::to_string(n);

    const auto s_wire = [n](std::uint64_t i) -> WireIndex {
        if (i == 0) return 1;
        if (i == n) return 2;
        return static_cast<WireIndex>(2 + i);
    };

    ecs.constraints.reserve(n);
    ecs.solver.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        // s_i * s_{i+1} = 1
        Constraint con;
        con.a = lc({{s_wire(i), 1}});
        con.b = lc({{s_wire(i + 1), 1}});
        con.c = lc({{0, 1}});
        ecs.constraints.push_back(std::move(con));

        ecs.solver.emplace_back(InvOp{s_wire(i + 1), s_wire(i)});
    }

    ecs.validate();
    return ecs;
}

Workload generate_workload(const WorkloadSpec& spec) {
    FieldPtr field = spec.modulus == 0 ? Field::make(Field::default_modulus())
                                       : Field::make(spec.modulus);
    Workload workload;
    workload.ecs = squaring_chain_circuit(spec.n, field);
    workload.public_inputs = {field->reduce(spec.seed_input)};
    return workload;
}

} // namespace zkprov
