#include "zkprov/spotcheck.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "zkprov/errors.hpp"

namespace zkprov {
namespace detail {
namespace {

constexpr std::string_view kPayloadMagic = "SPCK";

void append_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void append_row(Bytes& out, const LinearCombination& lc) {
    append_le64(out, lc.terms.size());
    for (const auto& [wire, coeff] : lc.terms) {
        append_u32(out, wire);
        Digest le = to_le_bytes(coeff);
        out.insert(out.end(), le.begin(), le.end());
    }
}

struct PayloadReader {
    std::span<const std::uint8_t> data;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (data.size() - pos < n) {
            throw Error(ErrorCode::kParse, "proving-key payload truncated");
        }
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
        }
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = read_le64(data.subspan(pos).first<8>());
        pos += 8;
        return v;
    }
    Digest digest() {
        need(32);
        Digest d;
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(pos), 32, d.begin());
        pos += 32;
        return d;
    }
};

} // namespace

Bytes encode_pk_payload(const CircuitArtifact& ecs, std::uint32_t k) {
    Bytes out;
    out.insert(out.end(), kPayloadMagic.begin(), kPayloadMagic.end());
    append_u32(out, 1);
    append_u32(out, k);
    append_le64(out, ecs.constraints.size());
    for (const Constraint& ct : ecs.constraints) {
        append_row(out, ct.a);
        append_row(out, ct.b);
        append_row(out, ct.c);
    }
    return out;
}

PkPayload decode_pk_payload(std::span<const std::uint8_t> bytes) {
    PayloadReader r{bytes};
    r.need(4);
    if (!std::equal(kPayloadMagic.begin(), kPayloadMagic.end(), bytes.begin())) {
        throw Error(ErrorCode::kParse, "proving-key payload: bad magic");
    }
    r.pos = 4;
    if (r.u32() != 1) {
        throw Error(ErrorCode::kParse, "proving-key payload: unsupported version");
    }
    PkPayload out;
    out.k = r.u32();
    std::uint64_t m = r.u64();
    if (m > bytes.size()) { // every constraint costs at least 24 bytes
        throw Error(ErrorCode::kParse, "proving-key payload: implausible constraint count");
    }
    auto read_row = [&] {
        LinearCombination lc;
        std::uint64_t terms = r.u64();
        if (terms > bytes.size()) {
            throw Error(ErrorCode::kParse, "proving-key payload: implausible term count");
        }
        lc.terms.reserve(static_cast<std::size_t>(terms));
        for (std::uint64_t t = 0; t < terms; ++t) {
            std::uint32_t wire = r.u32();
            lc.terms.emplace_back(wire, from_le_bytes(r.digest()));
        }
        return lc;
    };
    out.rows.reserve(static_cast<std::size_t>(m));
    for (std::uint64_t i = 0; i < m; ++i) {
        Constraint ct;
        ct.a = read_row();
        ct.b = read_row();
        ct.c = read_row();
        out.rows.push_back(std::move(ct));
    }
    if (r.pos != bytes.size()) {
        throw Error(ErrorCode::kParse, "proving-key payload: trailing bytes");
    }
    return out;
}

} // namespace detail

namespace {

std::vector<WireIndex> constraint_wires(const Constraint& ct) {
    std::vector<WireIndex> wires;
    wires.reserve(ct.a.terms.size() + ct.b.terms.size() + ct.c.terms.size());
    for (const LinearCombination* lc : {&ct.a, &ct.b, &ct.c}) {
        for (const auto& [wire, coeff] : lc->terms) {
            wires.push_back(wire);
        }
    }
    std::sort(wires.begin(), wires.end());
    wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
    return wires;
}

std::vector<WireIndex> public_wires(const CircuitArtifact& ecs) {
    std::vector<WireIndex> wires;
    wires.reserve(1 + ecs.num_public_inputs + ecs.num_public_outputs);
    wires.push_back(0);
    for (std::uint32_t i = 0; i < ecs.num_public_inputs; ++i) {
        wires.push_back(ecs.public_input_wire(i));
    }
    for (std::uint32_t i = 0; i < ecs.num_public_outputs; ++i) {
        wires.push_back(ecs.output_wire(i));
    }
    return wires;
}

BigInt evaluate_sparse(const LinearCombination& lc, const std::map<WireIndex, BigInt>& values,
                       const Field& field) {
    BigInt acc = 0;
    for (const auto& [wire, coeff] : lc.terms) {
        acc = field.add(acc, field.mul(coeff, values.at(wire)));
    }
    return acc;
}

} // namespace

Proof detail::build_spotcheck_proof(const VerifyingKey& vk, const CircuitArtifact& ecs,
                                    const WitnessVector& w, const std::vector<BigInt>& x,
                                    const std::vector<BigInt>& outputs) {
    if (w.size() != ecs.num_wires) {
        throw Error(ErrorCode::kMalformedWitness, "witness length does not match circuit");
    }
    std::vector<Digest> leaves;
    leaves.reserve(w.size());
    for (const BigInt& v : w.values) {
        leaves.push_back(to_le_bytes(v));
    }
    MerkleTree tree = MerkleTree::build(leaves);

    Proof proof;
    proof.root = tree.root();
    proof.num_leaves = w.size();
    proof.outputs = outputs;
    for (WireIndex wire : public_wires(ecs)) {
        proof.public_openings.push_back(Opening{wire, w.values[wire], tree.open(wire)});
    }
    if (!ecs.constraints.empty()) {
        std::vector<std::uint32_t> queries = derive_query_indices(
            vk, x, outputs, proof.root, static_cast<std::uint32_t>(ecs.constraints.size()));
        proof.query_openings.reserve(queries.size());
        for (std::uint32_t ci : queries) {
            QueryOpening qo;
            qo.constraint_index = ci;
            for (WireIndex wire : constraint_wires(ecs.constraints[ci])) {
                qo.openings.push_back(Opening{wire, w.values[wire], tree.open(wire)});
            }
            proof.query_openings.push_back(std::move(qo));
        }
    }
    return proof;
}

Proof prove_spotcheck(const ProvingKey& pk, const CircuitArtifact& ecs, const WitnessVector& w,
                      const std::vector<BigInt>& x, const std::vector<BigInt>& outputs) {
    detail::PkPayload payload = detail::decode_pk_payload(pk.payload);
    if (payload.rows.size() != ecs.constraints.size() ||
        !std::equal(payload.rows.begin(), payload.rows.end(), ecs.constraints.begin())) {
        throw Error(ErrorCode::kInternal, "proving key was set up for a different circuit");
    }
    if (w.size() != ecs.num_wires || w.values[0] != 1) {
        throw Error(ErrorCode::kInternal, "witness does not follow the wire layout");
    }
    if (x.size() != ecs.num_public_inputs || outputs.size() != ecs.num_public_outputs) {
        throw Error(ErrorCode::kInternal, "public vector arity does not match circuit");
    }
    for (std::uint32_t i = 0; i < ecs.num_public_inputs; ++i) {
        if (w.values[ecs.public_input_wire(i)] != x[i]) {
            throw Error(ErrorCode::kInternal, "witness disagrees with public input " +
                                                  std::to_string(i));
        }
    }
    for (std::uint32_t i = 0; i < ecs.num_public_outputs; ++i) {
        if (w.values[ecs.output_wire(i)] != outputs[i]) {
            throw Error(ErrorCode::kInternal,
                        "witness disagrees with output " + std::to_string(i));
        }
    }
    if (!check_constraints(ecs, w).empty()) {
        throw Error(ErrorCode::kInternal, "refusing to prove a violated constraint system");
    }
    VerifyingKey vk{pk.backend_id, pk.circuit_id, payload.k, ecs.field->modulus()};
    return detail::build_spotcheck_proof(vk, ecs, w, x, outputs);
}

VerifyResult verify_spotcheck(const VerifyingKey& vk, const std::vector<BigInt>& x,
                              const std::vector<BigInt>& outputs, const Proof& proof,
                              const CircuitArtifact& ecs) {
    if (vk.k == 0) {
        throw Error(ErrorCode::kBadRequest, "verifying key has k = 0");
    }
    if (vk.circuit_id != circuit_id(ecs)) {
        throw Error(ErrorCode::kBadRequest, "verifying key is for a different circuit");
    }
    if (vk.modulus != ecs.field->modulus()) {
        throw Error(ErrorCode::kBadRequest, "verifying key is for a different field");
    }
    const Field& field = *ecs.field;
    if (x.size() != ecs.num_public_inputs) {
        throw Error(ErrorCode::kBadRequest, "expected " + std::to_string(ecs.num_public_inputs) +
                                                " public inputs, got " + std::to_string(x.size()));
    }
    if (outputs.size() != ecs.num_public_outputs) {
        throw Error(ErrorCode::kBadRequest, "expected " +
                                                std::to_string(ecs.num_public_outputs) +
                                                " outputs, got " + std::to_string(outputs.size()));
    }
    for (const BigInt& v : x) {
        if (!field.is_canonical(v)) {
            throw Error(ErrorCode::kBadRequest, "public input not a canonical field element");
        }
    }
    for (const BigInt& v : outputs) {
        if (!field.is_canonical(v)) {
            throw Error(ErrorCode::kBadRequest, "output not a canonical field element");
        }
    }

    auto reject = [](std::string_view reason) {
        return VerifyResult{false, std::string(reason)};
    };

    // The commitment must cover exactly the wire set, or the fixed wire
    // layout means nothing.
    if (proof.num_leaves != ecs.num_wires) {
        return reject(kRejectBadPath);
    }
    if (proof.outputs != outputs) {
        return reject(kRejectBadPublicWire);
    }

    // Claimed values at the public positions of the wire layout.
    std::map<WireIndex, BigInt> claimed;
    claimed.emplace(0, BigInt(1));
    for (std::uint32_t i = 0; i < ecs.num_public_inputs; ++i) {
        claimed.emplace(ecs.public_input_wire(i), x[i]);
    }
    for (std::uint32_t i = 0; i < ecs.num_public_outputs; ++i) {
        claimed.emplace(ecs.output_wire(i), outputs[i]);
    }

    std::vector<WireIndex> expected_public = public_wires(ecs);
    if (proof.public_openings.size() != expected_public.size()) {
        return reject(kRejectBadPublicWire);
    }
    for (std::size_t i = 0; i < expected_public.size(); ++i) {
        const Opening& op = proof.public_openings[i];
        if (op.wire != expected_public[i]) {
            return reject(kRejectBadPublicWire);
        }
        if (op.path.leaf_index != op.wire || !field.is_canonical(op.value) ||
            !verify_path(proof.root, proof.num_leaves, to_le_bytes(op.value), op.path)) {
            return reject(kRejectBadPath);
        }
        if (op.value != claimed.at(op.wire)) {
            return reject(kRejectBadPublicWire);
        }
    }

    const auto m = static_cast<std::uint32_t>(ecs.constraints.size());
    if (m == 0) {
        // Constraint-free circuits carry no queries; the public openings are
        // the whole claim.
        if (!proof.query_openings.empty()) {
            return reject(kRejectBadQueryOrder);
        }
        return VerifyResult{true, ""};
    }

    std::vector<std::uint32_t> queries = derive_query_indices(vk, x, outputs, proof.root, m);
    if (proof.query_openings.size() != queries.size()) {
        return reject(kRejectBadQueryOrder);
    }
    for (std::size_t j = 0; j < queries.size(); ++j) {
        const QueryOpening& qo = proof.query_openings[j];
        if (qo.constraint_index != queries[j]) {
            return reject(kRejectBadQueryOrder);
        }
        const Constraint& ct = ecs.constraints[qo.constraint_index];
        std::vector<WireIndex> expected_wires = constraint_wires(ct);
        if (qo.openings.size() != expected_wires.size()) {
            return reject(kRejectBadQueryOrder);
        }
        std::map<WireIndex, BigInt> opened;
        for (std::size_t i = 0; i < expected_wires.size(); ++i) {
            const Opening& op = qo.openings[i];
            if (op.wire != expected_wires[i]) {
                return reject(kRejectBadQueryOrder);
            }
            if (op.path.leaf_index != op.wire || !field.is_canonical(op.value) ||
                !verify_path(proof.root, proof.num_leaves, to_le_bytes(op.value), op.path)) {
                return reject(kRejectBadPath);
            }
            if (auto it = claimed.find(op.wire); it != claimed.end() && it->second != op.value) {
                return reject(kRejectBadPublicWire);
            }
            opened.emplace(op.wire, op.value);
        }
        BigInt a = evaluate_sparse(ct.a, opened, field);
        BigInt b = evaluate_sparse(ct.b, opened, field);
        BigInt c = evaluate_sparse(ct.c, opened, field);
        if (field.mul(a, b) != c) {
            return reject(kRejectConstraintViolated);
        }
    }
    return VerifyResult{true, ""};
}

} // namespace zkprov
