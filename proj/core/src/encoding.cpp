#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/sha256.hpp"

namespace zkprov {
namespace {

using nlohmann::json;

json lc_to_json(const LinearCombination& lc) {
    json arr = json::array();
    for (const auto& [index, coeff] : lc.terms) {
        arr.push_back(json::array({index, to_decimal(coeff)}));
    }
    return arr;
}

json instruction_to_json(const SolverInstruction& ins) {
    return std::visit(
        [](const auto& op) -> json {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, ConstOp>) {
                return json::array({"const", op.target, to_decimal(op.value)});
            } else if constexpr (std::is_same_v<T, AddOp>) {
                return json::array({"add", op.target, op.lhs, op.rhs});
            } else if constexpr (std::is_same_v<T, SubOp>) {
                return json::array({"sub", op.target, op.lhs, op.rhs});
            } else if constexpr (std::is_same_v<T, MulOp>) {
                return json::array({"mul", op.target, op.lhs, op.rhs});
            } else if constexpr (std::is_same_v<T, InvOp>) {
                return json::array({"inv", op.target, op.src});
            } else {
                static_assert(std::is_same_v<T, AssertEqOp>);
                return json::array({"asserteq", op.lhs, op.rhs});
            }
        },
        ins);
}

const json& member(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::kParse, std::string("ECS: missing key \"") + key + "\"");
    }
    return *it;
}

std::uint32_t get_u32(const json& j, const char* what) {
    if (!j.is_number_unsigned()) {
        throw Error(ErrorCode::kParse, std::string("ECS: ") + what + " must be an unsigned integer");
    }
    auto v = j.get<std::uint64_t>();
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::kParse, std::string("ECS: ") + what + " out of range");
    }
    return static_cast<std::uint32_t>(v);
}

std::string get_string(const json& j, const char* what) {
    if (!j.is_string()) {
        throw Error(ErrorCode::kParse, std::string("ECS: ") + what + " must be a string");
    }
    return j.get<std::string>();
}

BigInt get_decimal(const json& j, const char* what) {
    std::string text = get_string(j, what);
    try {
        return parse_decimal(text);
    } catch (const Error& e) {
        throw Error(ErrorCode::kMalformedCircuit, std::string("ECS: ") + what + ": " + e.what());
    }
}

LinearCombination lc_from_json(const json& j, const char* what) {
    if (!j.is_array()) {
        throw Error(ErrorCode::kParse, std::string("ECS: ") + what + " must be an array");
    }
    LinearCombination lc;
    lc.terms.reserve(j.size());
    for (const json& term : j) {
        if (!term.is_array() || term.size() != 2) {
            throw Error(ErrorCode::kParse,
                        std::string("ECS: ") + what + " term must be [wire, coefficient]");
        }
        lc.terms.emplace_back(get_u32(term[0], "wire index"), get_decimal(term[1], "coefficient"));
    }
    return lc;
}

SolverInstruction instruction_from_json(const json& j) {
    if (!j.is_array() || j.empty()) {
        throw Error(ErrorCode::kParse, "ECS: solver instruction must be a non-empty array");
    }
    std::string op = get_string(j[0], "solver opcode");
    auto arity = [&](std::size_t n) {
        if (j.size() != n) {
            throw Error(ErrorCode::kParse, "ECS: solver \"" + op + "\" expects " +
                                               std::to_string(n - 1) + " operands");
        }
    };
    if (op == "const") {
        arity(3);
        return ConstOp{get_u32(j[1], "target wire"), get_decimal(j[2], "constant")};
    }
    if (op == "add") {
        arity(4);
        return AddOp{get_u32(j[1], "target wire"), get_u32(j[2], "operand wire"),
                     get_u32(j[3], "operand wire")};
    }
    if (op == "sub") {
        arity(4);
        return SubOp{get_u32(j[1], "target wire"), get_u32(j[2], "operand wire"),
                     get_u32(j[3], "operand wire")};
    }
    if (op == "mul") {
        arity(4);
        return MulOp{get_u32(j[1], "target wire"), get_u32(j[2], "operand wire"),
                     get_u32(j[3], "operand wire")};
    }
    if (op == "inv") {
        arity(3);
        return InvOp{get_u32(j[1], "target wire"), get_u32(j[2], "source wire")};
    }
    if (op == "asserteq") {
        arity(3);
        return AssertEqOp{get_u32(j[1], "operand wire"), get_u32(j[2], "operand wire")};
    }
    throw Error(ErrorCode::kParse, "ECS: unknown solver opcode \"" + op + "\"");
}

} // namespace

CircuitId CircuitId::from_hex(std::string_view hex) {
    return CircuitId{digest_from_hex(hex)};
}

std::string encode_circuit(const CircuitArtifact& ecs) {
    ecs.validate();
    json doc;
    doc["version"] = 1;
    doc["name"] = ecs.name;
    doc["field"] = json{{"modulus", to_decimal(ecs.field->modulus())}};
    doc["num_public_inputs"] = ecs.num_public_inputs;
    doc["num_public_outputs"] = ecs.num_public_outputs;
    doc["num_private_inputs"] = ecs.num_private_inputs;
    doc["num_wires"] = ecs.num_wires;
    json constraints = json::array();
    for (const Constraint& ct : ecs.constraints) {
        constraints.push_back(json::array({lc_to_json(ct.a), lc_to_json(ct.b), lc_to_json(ct.c)}));
    }
    doc["constraints"] = std::move(constraints);
    json solver = json::array();
    for (const SolverInstruction& ins : ecs.solver) {
        solver.push_back(instruction_to_json(ins));
    }
    doc["solver"] = std::move(solver);
    return doc.dump();
}

CircuitArtifact decode_circuit(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string("ECS: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "ECS: document must be a JSON object");
    }
    const json& version = member(doc, "version");
    if (!version.is_number_unsigned() || version.get<std::uint64_t>() != 1) {
        throw Error(ErrorCode::kParse, "ECS: unsupported version");
    }

    CircuitArtifact ecs;
    ecs.name = get_string(member(doc, "name"), "name");
    const json& field = member(doc, "field");
    if (!field.is_object()) {
        throw Error(ErrorCode::kParse, "ECS: field must be an object");
    }
    BigInt modulus = get_decimal(member(field, "modulus"), "field modulus");
    try {
        ecs.field = Field::make(std::move(modulus));
    } catch (const Error& e) {
        throw Error(ErrorCode::kMalformedCircuit, std::string("ECS: field modulus: ") + e.what());
    }
    ecs.num_public_inputs = get_u32(member(doc, "num_public_inputs"), "num_public_inputs");
    ecs.num_public_outputs = get_u32(member(doc, "num_public_outputs"), "num_public_outputs");
    ecs.num_private_inputs = get_u32(member(doc, "num_private_inputs"), "num_private_inputs");
    ecs.num_wires = get_u32(member(doc, "num_wires"), "num_wires");

    const json& constraints = member(doc, "constraints");
    if (!constraints.is_array()) {
        throw Error(ErrorCode::kParse, "ECS: constraints must be an array");
    }
    ecs.constraints.reserve(constraints.size());
    for (const json& ct : constraints) {
        if (!ct.is_array() || ct.size() != 3) {
            throw Error(ErrorCode::kParse, "ECS: constraint must be [a, b, c]");
        }
        ecs.constraints.push_back(Constraint{lc_from_json(ct[0], "constraint a"),
                                             lc_from_json(ct[1], "constraint b"),
                                             lc_from_json(ct[2], "constraint c")});
    }

    const json& solver = member(doc, "solver");
    if (!solver.is_array()) {
        throw Error(ErrorCode::kParse, "ECS: solver must be an array");
    }
    ecs.solver.reserve(solver.size());
    for (const json& ins : solver) {
        ecs.solver.push_back(instruction_from_json(ins));
    }

    ecs.validate();

    // Identity is the hash of the bytes, so only the canonical spelling of a
    // circuit is admissible: anything else would let one circuit carry two ids.
    if (encode_circuit(ecs) != bytes) {
        throw Error(ErrorCode::kInvariantViolation, "ECS: document is not in canonical form");
    }
    return ecs;
}

CircuitId circuit_id(const CircuitArtifact& ecs) {
    return circuit_id_of_encoding(encode_circuit(ecs));
}

CircuitId circuit_id_of_encoding(std::string_view bytes) {
    return CircuitId{sha256(bytes)};
}

} // namespace zkprov
