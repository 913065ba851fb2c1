#include <doctest.h>

#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/workload.hpp"

#include "checks.hpp"
#include "support.hpp"

using namespace zkprov;
using namespace zkprov::testsupport;

TEST_SUITE("workload") {

TEST_CASE("the squaring chain computes s_{i+1} = s_i^2 + s_i") {
    // p=97, s_0=2: 2 -> 6 -> 42 -> 60.
    auto ecs = squaring_chain_circuit(3, field97());
    CHECK(ecs.num_public_inputs == 1);
    CHECK(ecs.num_public_outputs == 1);
    CHECK(ecs.num_private_inputs == 0);
    CHECK(ecs.constraints.size() == 3);

    SolveResult solved = solve_witness(ecs, {2}, {});
    CHECK(solved.outputs == std::vector<BigInt>{60});
    CHECK(check_constraints(ecs, solved.witness).empty());

    // Chain length 1 with s_0 = 0 stays at 0.
    auto tiny = squaring_chain_circuit(1, field97());
    CHECK(solve_witness(tiny, {0}, {}).outputs == std::vector<BigInt>{0});
}

TEST_CASE("constraint count equals the requested size") {
    for (std::uint64_t n : {1ull, 2ull, 17ull, 256ull}) {
        auto ecs = squaring_chain_circuit(n, field97());
        CHECK(ecs.constraints.size() == n);
        CHECK(ecs.solver.size() >= n);
        SolveResult solved = solve_witness(ecs, {3}, {});
        CHECK(check_constraints(ecs, solved.witness).empty());
    }
}

TEST_CASE("generate_workload fills the spec defaults") {
    WorkloadSpec spec;
    spec.n = 3;
    spec.modulus = 97;
    spec.seed_input = 2;
    Workload w = generate_workload(spec);
    CHECK(w.public_inputs == std::vector<BigInt>{2});
    CHECK(solve_witness(w.ecs, w.public_inputs, {}).outputs == std::vector<BigInt>{60});

    // Zero modulus selects the default field; the seed reduces into it.
    WorkloadSpec dflt;
    dflt.n = 1;
    dflt.seed_input = Field::default_modulus() + 5;
    Workload wd = generate_workload(dflt);
    CHECK(wd.ecs.field->modulus() == Field::default_modulus());
    CHECK(wd.public_inputs == std::vector<BigInt>{5});

    // Seeds reduce modulo small fields too: 200 mod 97 = 6.
    WorkloadSpec small;
    small.n = 1;
    small.modulus = 97;
    small.seed_input = 200;
    CHECK(generate_workload(small).public_inputs == std::vector<BigInt>{6});
}

TEST_CASE("the chain encoding is frozen") {
    // Canonical bytes of the n=3, p=97 chain hash to a pinned id; any drift
    // in the workload generator or the encoder shows up here.
    auto ecs = squaring_chain_circuit(3, field97());
    CHECK(circuit_id(ecs).hex() ==
          "b2d48f46225e1a89f2400fb9a91c5dbde9b6d4fd71b9782f8ae17376a2e808dc");
}

TEST_CASE("the inverse chain solves and blows up on a zero seed") {
    auto ecs = inverse_chain_circuit(5, field97());
    CHECK(ecs.constraints.size() == 5);
    SolveResult solved = solve_witness(ecs, {3}, {});
    CHECK(check_constraints(ecs, solved.witness).empty());
    // Odd chain length inverts an odd number of times: 3^-1 = 65 in F_97.
    CHECK(solved.outputs == std::vector<BigInt>{65});
    // Even length returns to the seed.
    auto even = inverse_chain_circuit(4, field97());
    CHECK(solve_witness(even, {3}, {}).outputs == std::vector<BigInt>{3});

    Error err = error_of([&] { solve_witness(ecs, {0}, {}); });
    CHECK(err.code() == ErrorCode::kDivisionByZero);
    CHECK(err.has_index());
    CHECK(err.index() == 0);
}

TEST_CASE("degenerate sizes are configuration errors") {
    CHECK(code_of([] { squaring_chain_circuit(0, field97()); }) == ErrorCode::kConfig);
    CHECK(code_of([] { inverse_chain_circuit(0, field97()); }) == ErrorCode::kConfig);
    WorkloadSpec spec;
    spec.n = 0;
    CHECK(code_of([&] { generate_workload(spec); }) == ErrorCode::kConfig);
}

TEST_CASE("workload circuits round-trip the canonical encoding") {
    for (std::uint64_t n : {1ull, 7ull}) {
        auto ecs = squaring_chain_circuit(n, Field::make(Field::default_modulus()));
        std::string bytes = encode_circuit(ecs);
        CircuitArtifact back = decode_circuit(bytes);
        CHECK(back.equals(ecs));
        CHECK(encode_circuit(back) == bytes);
    }
}

} // TEST_SUITE
