#include <doctest.h>

#include <random>

#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/workload.hpp"

#include "checks.hpp"
#include "support.hpp"

using namespace zkprov;
using namespace zkprov::testsupport;

namespace {

// Canonical bytes of the square fixture and the squaring chain (n=3, p=97),
// with their ids recomputed by an external SHA-256 tool. These freeze the
// wire format: any encoder drift breaks equality here.
const std::string kSquareBytes =
    R"({"constraints":[[[[2,"1"]],[[2,"1"]],[[1,"1"]]]],"field":{"modulus":"97"},)"
    R"("name":"square","num_private_inputs":1,"num_public_inputs":0,)"
    R"("num_public_outputs":1,"num_wires":3,"solver":[["mul",1,2,2]],"version":1})";
const std::string kSquareId =
    "be056546e4f7316342fd99fb3b485c1e1e2da45971b3310956554cf6c4fab15e";

const std::string kChainBytes =
    R"({"constraints":[[[[1,"1"]],[[1,"1"]],[[1,"96"],[3,"1"]]],)"
    R"([[[3,"1"]],[[3,"1"]],[[3,"96"],[4,"1"]]],)"
    R"([[[4,"1"]],[[4,"1"]],[[2,"1"],[4,"96"]]]],)"
    R"("field":{"modulus":"97"},"name":"squaring-chain-n3","num_private_inputs":0,)"
    R"("num_public_inputs":1,"num_public_outputs":1,"num_wires":8,)"
    R"("solver":[["mul",5,1,1],["add",3,5,1],["mul",6,3,3],["add",4,6,3],)"
    R"(["mul",7,4,4],["add",2,7,4]],"version":1})";
const std::string kChainId =
    "b2d48f46225e1a89f2400fb9a91c5dbde9b6d4fd71b9782f8ae17376a2e808dc";

} // namespace

TEST_SUITE("encoding") {

TEST_CASE("the square fixture encodes to its frozen canonical bytes") {
    auto square = square_circuit(field97());
    CHECK(encode_circuit(square) == kSquareBytes);
    CHECK(circuit_id(square).hex() == kSquareId);
    CHECK(circuit_id_of_encoding(kSquareBytes).hex() == kSquareId);
}

TEST_CASE("the squaring-chain fixture encodes to its frozen canonical bytes") {
    CircuitArtifact chain = squaring_chain_circuit(3, field97());
    CHECK(encode_circuit(chain) == kChainBytes);
    CHECK(circuit_id(chain).hex() == kChainId);
}

TEST_CASE("encode and decode are mutually inverse") {
    auto square = square_circuit(field97());
    CHECK(decode_circuit(encode_circuit(square)).equals(square));
    CHECK(encode_circuit(square) == encode_circuit(square));
    CHECK(encode_circuit(decode_circuit(kChainBytes)) == kChainBytes);
    CHECK(circuit_id(decode_circuit(kSquareBytes)).hex() == kSquareId);

    std::mt19937_64 rng(0xe2c0de);
    GeneratorLimits limits;
    for (int i = 0; i < 100; ++i) {
        FieldPtr field = (i % 2) ? field97() : Field::make(Field::default_modulus());
        CircuitArtifact ecs = generate_instance(rng, field, limits).ecs;
        std::string bytes = encode_circuit(ecs);
        CircuitArtifact back = decode_circuit(bytes);
        CHECK(back.equals(ecs));
        CHECK(encode_circuit(back) == bytes);
        CHECK(circuit_id(back) == circuit_id(ecs));
    }
}

TEST_CASE("one changed coefficient changes the id") {
    CircuitArtifact a = square_circuit(field97());
    CircuitArtifact b = a;
    b.constraints[0].c.terms[0].second = 2; // t = 2 * a*a instead
    b.validate();
    CHECK(circuit_id(a) != circuit_id(b));
    CHECK(encode_circuit(a) != encode_circuit(b));
}

TEST_CASE("decode rejects non-canonical and malformed documents") {
    CHECK(code_of([] { decode_circuit("not json"); }) == ErrorCode::kParse);
    CHECK(code_of([] { decode_circuit("[]"); }) == ErrorCode::kParse);
    CHECK(code_of([] { decode_circuit("{}"); }) == ErrorCode::kParse);

    // Whitespace, reordered keys or trailing data break canonical form.
    std::string spaced = kSquareBytes;
    spaced.insert(spaced.find(':'), " ");
    CHECK(code_of([&] { decode_circuit(spaced); }) == ErrorCode::kInvariantViolation);

    // A non-canonical decimal alters the bytes but not the parsed value.
    std::string padded = kSquareBytes;
    std::size_t pos = padded.find("\"97\"");
    padded.replace(pos, 4, "\"097\"");
    CHECK_THROWS_AS(decode_circuit(padded), Error);

    std::string versioned = kSquareBytes;
    versioned.replace(versioned.find("\"version\":1"), 11, "\"version\":2");
    CHECK(code_of([&] { decode_circuit(versioned); }) == ErrorCode::kParse);

    std::string composite = kSquareBytes;
    composite.replace(composite.find("\"97\""), 4, "\"91\"");
    CHECK(code_of([&] { decode_circuit(composite); }) == ErrorCode::kMalformedCircuit);

    // Wire index beyond num_wires: structurally well-formed JSON, invalid ECS.
    std::string out_of_range = kSquareBytes;
    out_of_range.replace(out_of_range.find("[[[[2,"), 6, "[[[[9,");
    CHECK(code_of([&] { decode_circuit(out_of_range); }) == ErrorCode::kInvariantViolation);

    // Coefficient outside the field.
    std::string big_coeff = kSquareBytes;
    big_coeff.replace(big_coeff.find("[[2,\"1\"]]"), 9, "[[2,\"98\"]]");
    CHECK_THROWS_AS(decode_circuit(big_coeff), Error);
}

TEST_CASE("circuit ids parse strictly") {
    CircuitId id = CircuitId::from_hex(kSquareId);
    CHECK(id.hex() == kSquareId);
    CHECK(code_of([] { CircuitId::from_hex("abc"); }) == ErrorCode::kParse);
    CHECK(code_of([] {
        CircuitId::from_hex("BE056546E4F7316342FD99FB3B485C1E1E2DA45971B3310956554CF6C4FAB15E");
    }) == ErrorCode::kParse); // uppercase is not canonical
    CHECK(code_of([] {
        CircuitId::from_hex("zz056546e4f7316342fd99fb3b485c1e1e2da45971b3310956554cf6c4fab15e");
    }) == ErrorCode::kParse);
}

} // TEST_SUITE
