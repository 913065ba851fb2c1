#include "zkprov/proof_codec.hpp"

#include <limits>

#include <nlohmann/json.hpp>

#include "zkprov/errors.hpp"

namespace zkprov {
namespace {

using nlohmann::json;

json opening_to_json(const Opening& op) {
    json siblings = json::array();
    for (const Digest& s : op.path.siblings) {
        siblings.push_back(to_hex(s));
    }
    return json::array(
        {op.wire, to_decimal(op.value), json::array({op.path.leaf_index, std::move(siblings)})});
}

const json& at(const json& arr, std::size_t i) {
    return arr[i];
}

std::uint64_t get_u64(const json& j, const char* what) {
    if (!j.is_number_unsigned()) {
        throw Error(ErrorCode::kParse, std::string("proof: ") + what + " must be unsigned");
    }
    return j.get<std::uint64_t>();
}

std::uint32_t get_u32(const json& j, const char* what) {
    std::uint64_t v = get_u64(j, what);
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::kParse, std::string("proof: ") + what + " out of range");
    }
    return static_cast<std::uint32_t>(v);
}

std::string get_string(const json& j, const char* what) {
    if (!j.is_string()) {
        throw Error(ErrorCode::kParse, std::string("proof: ") + what + " must be a string");
    }
    return j.get<std::string>();
}

BigInt get_decimal(const json& j, const char* what) {
    try {
        return parse_decimal(get_string(j, what));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kParse) {
            throw Error(ErrorCode::kParse, std::string("proof: ") + what + ": " + e.what());
        }
        throw;
    }
}

Digest get_digest(const json& j, const char* what) {
    try {
        return digest_from_hex(get_string(j, what));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kParse) {
            throw Error(ErrorCode::kParse, std::string("proof: ") + what + ": " + e.what());
        }
        throw;
    }
}

Opening opening_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw Error(ErrorCode::kParse, "proof: opening must be [wire, value, path]");
    }
    Opening op;
    op.wire = get_u32(at(j, 0), "opening wire");
    op.value = get_decimal(at(j, 1), "opening value");
    const json& path = at(j, 2);
    if (!path.is_array() || path.size() != 2 || !path[1].is_array()) {
        throw Error(ErrorCode::kParse, "proof: path must be [leaf_index, siblings]");
    }
    op.path.leaf_index = get_u64(path[0], "leaf index");
    op.path.siblings.reserve(path[1].size());
    for (const json& s : path[1]) {
        op.path.siblings.push_back(get_digest(s, "path sibling"));
    }
    return op;
}

} // namespace

std::string encode_proof(const Proof& proof) {
    json doc;
    doc["version"] = 1;
    doc["backend"] = std::string(kSpotCheckBackendId);
    doc["root"] = to_hex(proof.root);
    doc["num_leaves"] = proof.num_leaves;
    json pub = json::array();
    for (const Opening& op : proof.public_openings) {
        pub.push_back(opening_to_json(op));
    }
    doc["public_openings"] = std::move(pub);
    json queries = json::array();
    for (const QueryOpening& qo : proof.query_openings) {
        json openings = json::array();
        for (const Opening& op : qo.openings) {
            openings.push_back(opening_to_json(op));
        }
        queries.push_back(json::array({qo.constraint_index, std::move(openings)}));
    }
    doc["query_openings"] = std::move(queries);
    json outs = json::array();
    for (const BigInt& v : proof.outputs) {
        outs.push_back(to_decimal(v));
    }
    doc["outputs"] = std::move(outs);
    return doc.dump();
}

Proof decode_proof(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string("proof: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || doc["version"] != 1) {
        throw Error(ErrorCode::kParse, "proof: unsupported document");
    }
    if (!doc.contains("backend") || doc["backend"] != std::string(kSpotCheckBackendId)) {
        throw Error(ErrorCode::kParse, "proof: unknown backend tag");
    }
    for (const char* key : {"root", "num_leaves", "public_openings", "query_openings", "outputs"}) {
        if (!doc.contains(key)) {
            throw Error(ErrorCode::kParse, std::string("proof: missing key \"") + key + "\"");
        }
    }
    Proof proof;
    proof.root = get_digest(doc["root"], "root");
    proof.num_leaves = get_u64(doc["num_leaves"], "num_leaves");
    if (!doc["public_openings"].is_array() || !doc["query_openings"].is_array() ||
        !doc["outputs"].is_array()) {
        throw Error(ErrorCode::kParse, "proof: openings and outputs must be arrays");
    }
    for (const json& op : doc["public_openings"]) {
        proof.public_openings.push_back(opening_from_json(op));
    }
    for (const json& q : doc["query_openings"]) {
        if (!q.is_array() || q.size() != 2 || !q[1].is_array()) {
            throw Error(ErrorCode::kParse, "proof: query opening must be [constraint, openings]");
        }
        QueryOpening qo;
        qo.constraint_index = get_u32(q[0], "constraint index");
        for (const json& op : q[1]) {
            qo.openings.push_back(opening_from_json(op));
        }
        proof.query_openings.push_back(std::move(qo));
    }
    for (const json& v : doc["outputs"]) {
        proof.outputs.push_back(get_decimal(v, "output"));
    }
    return proof;
}

} // namespace zkprov
