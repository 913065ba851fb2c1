#include "zkprov/backend.hpp"

#include "zkprov/errors.hpp"
#include "zkprov/proof_codec.hpp"
#include "zkprov/sha256.hpp"
#include "zkprov/spotcheck.hpp"

namespace zkprov {
namespace {

constexpr std::string_view kQueryContext = "zkprovd/v1/queries";

class SpotCheckBackend final : public ProvingBackend {
public:
    std::string_view id() const override { return kSpotCheckBackendId; }

    KeyPair setup(const CircuitArtifact& ecs, std::uint32_t k) const override {
        if (k == 0) {
            throw Error(ErrorCode::kBadRequest, "query count k must be at least 1");
        }
        ecs.validate();
        CircuitId cid = circuit_id(ecs);
        KeyPair keys;
        keys.pk = ProvingKey{std::string(id()), cid, detail::encode_pk_payload(ecs, k)};
        keys.vk = VerifyingKey{std::string(id()), cid, k, ecs.field->modulus()};
        return keys;
    }

    std::string prove(const ProvingKey& pk, const CircuitArtifact& ecs, const WitnessVector& w,
                      const std::vector<BigInt>& x,
                      const std::vector<BigInt>& outputs) const override {
        if (pk.backend_id != id()) {
            throw Error(ErrorCode::kBadRequest, "proving key is for backend " + pk.backend_id);
        }
        return encode_proof(prove_spotcheck(pk, ecs, w, x, outputs));
    }

    VerifyResult verify(const VerifyingKey& vk, const std::vector<BigInt>& x,
                        const std::vector<BigInt>& outputs, std::string_view proof_bytes,
                        const CircuitArtifact& ecs) const override {
        if (vk.backend_id != id()) {
            throw Error(ErrorCode::kBadRequest, "verifying key is for backend " + vk.backend_id);
        }
        return verify_spotcheck(vk, x, outputs, decode_proof(proof_bytes), ecs);
    }
};

const SpotCheckBackend g_spotcheck;

} // namespace

const ProvingBackend& backend_for(std::string_view backend_id) {
    if (backend_id == kSpotCheckBackendId) {
        return g_spotcheck;
    }
    throw Error(ErrorCode::kNotFound,
                "unknown proving backend \"" + std::string(backend_id) + "\"");
}

std::vector<std::string_view> backend_ids() {
    return {kSpotCheckBackendId};
}

std::vector<std::uint32_t> derive_query_indices(const VerifyingKey& vk,
                                                const std::vector<BigInt>& x,
                                                const std::vector<BigInt>& outputs,
                                                const Digest& root, std::uint32_t m) {
    if (m == 0) {
        throw Error(ErrorCode::kBadRequest, "cannot sample queries over zero constraints");
    }
    Sha256 h;
    h.update(kQueryContext);
    h.update(std::span<const std::uint8_t>(vk.circuit_id.bytes));
    Bytes buf;
    append_le64(buf, x.size());
    h.update(std::span<const std::uint8_t>(buf));
    for (const BigInt& v : x) {
        Digest le = to_le_bytes(v);
        h.update(std::span<const std::uint8_t>(le));
    }
    buf.clear();
    append_le64(buf, outputs.size());
    h.update(std::span<const std::uint8_t>(buf));
    for (const BigInt& v : outputs) {
        Digest le = to_le_bytes(v);
        h.update(std::span<const std::uint8_t>(le));
    }
    h.update(std::span<const std::uint8_t>(root));
    const Digest seed = h.finish();

    std::vector<std::uint32_t> indices;
    indices.reserve(vk.k);
    for (std::uint32_t j = 0; j < vk.k; ++j) {
        h.update(std::span<const std::uint8_t>(seed));
        buf.clear();
        append_le64(buf, j);
        h.update(std::span<const std::uint8_t>(buf));
        Digest dj = h.finish();
        std::uint64_t raw = read_le64(std::span<const std::uint8_t>(dj).first<8>());
        indices.push_back(static_cast<std::uint32_t>(raw % m));
    }
    return indices;
}

} // namespace zkprov
