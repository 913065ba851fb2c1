#include "zkprov/sha256.hpp"

#include <openssl/evp.h>

#include "zkprov/errors.hpp"

namespace zkprov {

namespace {
EVP_MD_CTX* make_ctx() {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error(ErrorCode::kInternal, "failed to initialize SHA-256 context");
    }
    return ctx;
}
} // namespace

Sha256::Sha256() : ctx_(make_ctx()) {}

Sha256::~Sha256() {
    EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_));
}

Sha256& Sha256::update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data, size) != 1) {
        throw Error(ErrorCode::kInternal, "SHA-256 update failed");
    }
    return *this;
}

Digest Sha256::finish() {
    Digest out{};
    unsigned int len = 0;
    auto* ctx = static_cast<EVP_MD_CTX*>(ctx_);
    if (EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size()) {
        throw Error(ErrorCode::kInternal, "SHA-256 finalize failed");
    }
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::kInternal, "SHA-256 reinit failed");
    }
    return out;
}

Digest sha256(std::span<const std::uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

Digest sha256(std::string_view data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

} // namespace zkprov
